"""
Interscheme property extraction: neighborhood similarity, synonymies and homonymies.

Two neighborhoods are similar when phi = 2|A'| / (|P| + |Q|) > 1/2, where A' is a maximum matching
of the bipartite graph whose arcs join lexically synonymous names. Two x-components are synonymous
at severity u when their neighborhoods are similar at every level v = 0..u.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterable

import networkx as nx
from networkx.algorithms import bipartite
from pydantic import BaseModel, ConfigDict, Field

from xsdmerge.core.errors import EmptyNeighborhood, SeverityOutOfRange, UnknownComponent
from xsdmerge.core.schema_model import SchemaModel, XComponent
from xsdmerge.core.thesaurus import Thesaurus, lexical_synonym
from xsdmerge.core.xs_graph import XsGraph, neighborhood, sorted_by_name

logger = logging.getLogger(__name__)

SIMILARITY_THRESHOLD = Fraction(1, 2)

LEFT = "P"
RIGHT = "Q"


class BipartiteGraph:
    """Name-synonymy graph between two component sets (left P, right Q)."""

    def __init__(self, left: Iterable[XComponent], right: Iterable[XComponent], t: Thesaurus):
        self.left = sorted_by_name(left)
        self.right = sorted_by_name(right)
        self.graph = nx.Graph()
        self.graph.add_nodes_from(((LEFT, p) for p in self.left), bipartite=0)
        self.graph.add_nodes_from(((RIGHT, q) for q in self.right), bipartite=1)
        for p in self.left:
            for q in self.right:
                if lexical_synonym(t, p.name, q.name):
                    self.graph.add_edge((LEFT, p), (RIGHT, q))

    @property
    def arcs(self) -> list[tuple[XComponent, XComponent]]:
        return sorted(
            ((a[1], b[1]) if a[0] == LEFT else (b[1], a[1]) for a, b in self.graph.edges),
            key=lambda arc: (arc[0].name, arc[1].name),
        )

    def maximum_matching(self) -> list[tuple[XComponent, XComponent]]:
        """A' as (left, right) pairs; arcs are unweighted so this is a maximum-cardinality matching."""
        top_nodes = [(LEFT, p) for p in self.left]
        matching = bipartite.hopcroft_karp_matching(self.graph, top_nodes=top_nodes)
        pairs = [(node[1], mate[1]) for node, mate in matching.items() if node[0] == LEFT]
        return sorted(pairs, key=lambda pair: (pair[0].name, pair[1].name))


def phi(left: Iterable[XComponent], right: Iterable[XComponent], t: Thesaurus) -> Fraction:
    """Neighborhood similarity as an exact rational in [0, 1]."""
    graph = BipartiteGraph(left, right, t)
    if not graph.left or not graph.right:
        raise EmptyNeighborhood("phi needs two non-empty component sets")
    matched = len(graph.maximum_matching())
    # Fraction normalizes; 2*5/(8+7) compares equal to Fraction(10, 15)
    return Fraction(2 * matched, len(graph.left) + len(graph.right))


def max_severity(s1: SchemaModel, s2: SchemaModel) -> int:
    m = max(len(s1.complex_elements()), len(s2.complex_elements()))
    return max(m - 1, 0)


def check_severity(u: int, s1: SchemaModel, s2: SchemaModel) -> None:
    bound = max_severity(s1, s2)
    if u < 0 or u > bound:
        raise SeverityOutOfRange(u, bound)


def _require(graph: XsGraph, component: XComponent) -> None:
    if not graph.model.contains(component):
        raise UnknownComponent(component.name, component.schema_id)


def similarity_profile(
    x1: XComponent, x2: XComponent, u: int, g1: XsGraph, g2: XsGraph, t: Thesaurus
) -> list[Fraction]:
    """phi of the level-v neighborhoods for every v in 0..u."""
    check_severity(u, g1.model, g2.model)
    _require(g1, x1)
    _require(g2, x2)
    return [phi(neighborhood(g1, x1, v), neighborhood(g2, x2, v), t) for v in range(u + 1)]


def synonymous(x1: XComponent, x2: XComponent, u: int, g1: XsGraph, g2: XsGraph, t: Thesaurus) -> bool:
    check_severity(u, g1.model, g2.model)
    _require(g1, x1)
    _require(g2, x2)
    for v in range(u + 1):
        if phi(neighborhood(g1, x1, v), neighborhood(g2, x2, v), t) <= SIMILARITY_THRESHOLD:
            return False
    return True


def homonymous(x1: XComponent, x2: XComponent, u: int, g1: XsGraph, g2: XsGraph, t: Thesaurus) -> bool:
    check_severity(u, g1.model, g2.model)
    if x1.key != x2.key:
        _require(g1, x1)
        _require(g2, x2)
        return False
    return not synonymous(x1, x2, u, g1, g2, t)


class Synonymy(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    left: XComponent
    right: XComponent
    phi: tuple[Fraction, ...]


class Homonymy(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: XComponent
    right: XComponent


class PropertySet(BaseModel):
    """Severity-tagged synonymies and homonymies between two schemas."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    severity: int = Field(ge=0)
    synonymies: tuple[Synonymy, ...] = ()
    homonymies: tuple[Homonymy, ...] = ()

    def synonym_pairs(self) -> set[tuple[str, str]]:
        return {(s.left.name, s.right.name) for s in self.synonymies}

    def to_document(self) -> dict:
        return {
            "severity": self.severity,
            "synonymies": sorted(
                ({"left": s.left.name, "right": s.right.name,
                  "phi": [round(float(value), 4) for value in s.phi]} for s in self.synonymies),
                key=lambda row: (row["left"], row["right"], row["phi"]),
            ),
            "homonymies": sorted(
                ({"left": h.left.name, "right": h.right.name} for h in self.homonymies),
                key=lambda row: (row["left"], row["right"]),
            ),
        }


def candidate_pairs(s1: SchemaModel, s2: SchemaModel, t: Thesaurus) -> list[tuple[XComponent, XComponent]]:
    """Complex x complex pairs, plus non-complex pairs whose names are equal or thesaurus-related."""
    pairs = []
    for x1 in sorted_by_name(s1.components):
        for x2 in sorted_by_name(s2.components):
            if x1.is_complex and x2.is_complex:
                pairs.append((x1, x2))
            elif not x1.is_complex and not x2.is_complex and lexical_synonym(t, x1.name, x2.name):
                pairs.append((x1, x2))
    return pairs


def extract_properties(
    s1: SchemaModel,
    s2: SchemaModel,
    u: int,
    g1: XsGraph,
    g2: XsGraph,
    t: Thesaurus,
    max_workers: int = 1,
) -> PropertySet:
    """Evaluate every candidate pair at severity ``u`` and collect synonymies and homonymies."""
    check_severity(u, s1, s2)
    pairs = candidate_pairs(s1, s2, t)

    def evaluate(pair: tuple[XComponent, XComponent]):
        x1, x2 = pair
        profile = []
        for v in range(u + 1):
            value = phi(neighborhood(g1, x1, v), neighborhood(g2, x2, v), t)
            profile.append(value)
            if value <= SIMILARITY_THRESHOLD:
                return x1, x2, profile, False
        return x1, x2, profile, True

    # Warm the memoized cost rows before fanning out
    for graph in (g1, g2):
        for component in graph.model.components:
            graph.cost_row(component)

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        results = list(pool.map(evaluate, pairs))

    synonymies = []
    homonymies = []
    for x1, x2, profile, similar in results:
        logger.debug(f"{x1} ~ {x2}: phi={[str(p) for p in profile]} similar={similar}")
        if similar:
            synonymies.append(Synonymy(left=x1, right=x2, phi=tuple(profile)))
        elif x1.key == x2.key:
            homonymies.append(Homonymy(left=x1, right=x2))

    logger.info(
        f"Severity {u}: {len(synonymies)} synonymies, {len(homonymies)} homonymies "
        f"from {len(pairs)} candidate pairs"
    )
    return PropertySet(severity=u, synonymies=tuple(synonymies), homonymies=tuple(homonymies))
