"""
XS-Graph: one node per x-component, one arc per near pair.

Arc costs are 0 (veryclose: attribute or simple sub-element) or 1 (close: complex sub-element or
IDREF(S) target). Connection costs are shortest-path costs over these arcs, computed one source row
at a time with a 0-1 breadth-first search and memoized.
"""

import logging
import math
from collections import deque
from enum import Enum
from typing import Iterable, Union

import networkx as nx

from xsdmerge.core.errors import UnknownComponent
from xsdmerge.core.instance_reader import RefTargetMap
from xsdmerge.core.schema_model import ID_REF_TYPES, SchemaModel, Typology, XComponent

logger = logging.getLogger(__name__)

Cost = Union[int, float]
INFINITY = math.inf

VERYCLOSE_COST = 0
CLOSE_COST = 1


class Proximity(str, Enum):
    VERY_CLOSE = "VeryClose"
    CLOSE = "Close"
    REACHABLE = "Reachable"
    UNREACHABLE = "Unreachable"

    @property
    def near(self) -> bool:
        return self in (Proximity.VERY_CLOSE, Proximity.CLOSE)


def _near_successors(model: SchemaModel, refmap: RefTargetMap, source: XComponent) -> dict[XComponent, int]:
    """Direct successors of ``source`` with their arc cost (self excluded)."""
    successors: dict[XComponent, int] = {}
    if not source.is_complex:
        return successors

    def add(target: XComponent, cost: int) -> None:
        if target == source:
            return
        successors[target] = min(cost, successors.get(target, cost))

    for use in model.attributes_of(source):
        attribute = model.attribute(use.ref)
        add(attribute, VERYCLOSE_COST)
        if attribute.data_type in ID_REF_TYPES:
            for target_name in sorted(refmap.targets_of(attribute.name)):
                target = model.lookup(target_name, Typology.COMPLEX_ELEMENT)
                if target is not None:
                    add(target, CLOSE_COST)
    for ref in model.children(source):
        child = model.element(ref.target)
        add(child, CLOSE_COST if child.is_complex else VERYCLOSE_COST)
    return successors


class XsGraph:
    """Directed 0/1-cost graph over the x-components of one schema."""

    def __init__(self, model: SchemaModel, refmap: RefTargetMap):
        self.model = model
        self.refmap = refmap
        self.graph = nx.DiGraph()
        for component in model.components:
            self.graph.add_node(component)
        for source in sorted(model.components, key=lambda c: (c.name, c.typology.value)):
            successors = _near_successors(model, refmap, source)
            for target in sorted(successors, key=lambda c: (c.name, c.typology.value)):
                self.graph.add_edge(source, target, cost=successors[target])
        self._cost_rows: dict[XComponent, dict[XComponent, int]] = {}

    @property
    def nodes(self) -> frozenset[XComponent]:
        return frozenset(self.graph.nodes)

    def arcs(self) -> list[tuple[XComponent, XComponent, int]]:
        """Arcs ordered by (source name, target name)."""
        return sorted(
            ((s, t, data["cost"]) for s, t, data in self.graph.edges(data=True)),
            key=lambda arc: (arc[0].name, arc[1].name, arc[0].typology.value, arc[1].typology.value),
        )

    def arc_cost(self, source: XComponent, target: XComponent):
        data = self.graph.get_edge_data(source, target)
        return None if data is None else data["cost"]

    def require(self, component: XComponent) -> None:
        if component not in self.graph:
            raise UnknownComponent(component.name, component.schema_id)

    def cost_row(self, source: XComponent) -> dict[XComponent, int]:
        """Finite connection costs from ``source`` (0-1 BFS), memoized per source."""
        self.require(source)
        row = self._cost_rows.get(source)
        if row is not None:
            return row

        distance: dict[XComponent, int] = {source: 0}
        frontier = deque([source])
        while frontier:
            node = frontier.popleft()
            for successor, data in self.graph.adj[node].items():
                candidate = distance[node] + data["cost"]
                if candidate < distance.get(successor, INFINITY):
                    distance[successor] = candidate
                    if data["cost"] == 0:
                        frontier.appendleft(successor)
                    else:
                        frontier.append(successor)
        self._cost_rows[source] = distance
        return distance

    def __len__(self) -> int:
        return self.graph.number_of_nodes()


def build_xs_graph(model: SchemaModel, refmap: RefTargetMap) -> XsGraph:
    graph = XsGraph(model, refmap)
    logger.info(
        f"Built XS-Graph for '{model.schema_id}': {graph.graph.number_of_nodes()} nodes, "
        f"{graph.graph.number_of_edges()} arcs"
    )
    return graph


def proximity(model: SchemaModel, refmap: RefTargetMap, x_s: XComponent, x_t: XComponent) -> Proximity:
    for component in (x_s, x_t):
        if not model.contains(component):
            raise UnknownComponent(component.name, component.schema_id)
    if x_s == x_t:
        return Proximity.VERY_CLOSE
    successors = _near_successors(model, refmap, x_s)
    if x_t in successors:
        return Proximity.VERY_CLOSE if successors[x_t] == VERYCLOSE_COST else Proximity.CLOSE

    seen = {x_s}
    frontier = deque([x_s])
    while frontier:
        node = frontier.popleft()
        for successor in _near_successors(model, refmap, node):
            if successor == x_t:
                return Proximity.REACHABLE
            if successor not in seen:
                seen.add(successor)
                frontier.append(successor)
    return Proximity.UNREACHABLE


def connection_cost(graph: XsGraph, x_s: XComponent, x_t: XComponent) -> Cost:
    graph.require(x_t)
    return graph.cost_row(x_s).get(x_t, INFINITY)


def neighborhood(graph: XsGraph, x: XComponent, j: int) -> frozenset[XComponent]:
    """Components whose connection cost from ``x`` is at most ``j``."""
    if j < 0:
        raise ValueError(f"neighborhood level must be non-negative, got {j}")
    return frozenset(t for t, cost in graph.cost_row(x).items() if cost <= j)


def sorted_by_name(components: Iterable[XComponent]) -> list[XComponent]:
    return sorted(components, key=lambda c: (c.name, c.typology.value))
