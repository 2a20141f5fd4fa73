"""
Merge and Rename Dictionaries.

SimG(u) joins the complex elements of S1 and S2 that are synonymous at severity u, weighting each
arc with phi at level u. A maximum-weight matching of SimG(u) picks the complex pairs to merge;
attributes and simple elements of matched parents join the Merge Dictionary when their names are
thesaurus-related (direct components) or equal (any component reachable from the parents) and
their data types are compatible. Each component keeps at most one partner: the largest matching
wins, then the one with most same-typology pairs, then the lexicographically smallest. The Rename Dictionary collects equally
named cross-schema pairs left out of the Merge Dictionary.
"""

import logging
import math
from fractions import Fraction
from typing import Literal, Optional

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from xsdmerge.core.data_types import compatible
from xsdmerge.core.interscheme import check_severity, phi, synonymous
from xsdmerge.core.schema_model import SchemaModel, XComponent
from xsdmerge.core.thesaurus import Thesaurus, lexical_synonym
from xsdmerge.core.xs_graph import XsGraph, neighborhood, sorted_by_name

logger = logging.getLogger(__name__)

LEFT_SIDE = 0
RIGHT_SIDE = 1

MergeRule = Literal["synonymy", "thesaurus", "same_name"]


class SimArc(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    left: XComponent
    right: XComponent
    weight: Fraction


class SimGraph(BaseModel):
    """Bipartite graph over complex elements weighted by neighborhood similarity."""

    model_config = ConfigDict(frozen=True)

    severity: int = Field(ge=0)
    left: tuple[XComponent, ...]
    right: tuple[XComponent, ...]
    arcs: tuple[SimArc, ...] = ()

    def weight(self, left: XComponent, right: XComponent) -> Optional[Fraction]:
        for arc in self.arcs:
            if arc.left == left and arc.right == right:
                return arc.weight
        return None


def build_simg(
    s1: SchemaModel, s2: SchemaModel, u: int, g1: XsGraph, g2: XsGraph, t: Thesaurus
) -> SimGraph:
    check_severity(u, s1, s2)
    left = sorted_by_name(s1.complex_elements())
    right = sorted_by_name(s2.complex_elements())
    arcs = []
    for e1 in left:
        for e2 in right:
            if synonymous(e1, e2, u, g1, g2, t):
                weight = phi(neighborhood(g1, e1, u), neighborhood(g2, e2, u), t)
                arcs.append(SimArc(left=e1, right=e2, weight=weight))
    logger.info(f"SimG({u}): {len(left)} x {len(right)} complex elements, {len(arcs)} arcs")
    return SimGraph(severity=u, left=tuple(left), right=tuple(right), arcs=tuple(arcs))


Pair = tuple[XComponent, XComponent]


def _pair_key(pair: Pair) -> tuple[str, str, str, str]:
    x1, x2 = pair
    return (x1.name, x2.name, x1.typology.value, x2.typology.value)


def _lexicographic_matching(weights: dict[Pair, int]) -> list[Pair]:
    """Maximum-weight one-to-one selection over positive integer weights.

    Among selections of equal total weight, the one whose sorted (left, right) name sequence is
    lexicographically smallest wins. Every pair gets a tie bit below the weight unit, larger for
    pairs that sort earlier, so a single exact matching settles both criteria.
    """
    if not weights:
        return []
    order = sorted(weights, key=_pair_key)
    bits = len(order)
    graph = nx.Graph()
    for rank, (x1, x2) in enumerate(order):
        # The tie bits of all pairs together stay below one weight unit
        weight = (weights[(x1, x2)] << bits) + (1 << (bits - 1 - rank))
        graph.add_edge((LEFT_SIDE, x1), (RIGHT_SIDE, x2), weight=weight)
    # Integer weights keep networkx on exact integer arithmetic
    chosen = []
    for a, b in nx.max_weight_matching(graph):
        if a[0] == RIGHT_SIDE:
            a, b = b, a
        chosen.append((a[1], b[1]))
    return sorted(chosen, key=_pair_key)


def max_weight_matching(graph: SimGraph) -> list[SimArc]:
    """Arcs of a matching maximizing the summed weight, ordered by (left, right) name.

    Weights are scaled to integers over their common denominator, so equal totals compare equal
    and ties go to the lexicographically smaller (left-name, right-name) sequence.
    """
    by_pair = {(arc.left, arc.right): arc for arc in graph.arcs}
    scale = math.lcm(*(arc.weight.denominator for arc in graph.arcs)) if graph.arcs else 1
    weights = {pair: int(arc.weight * scale) for pair, arc in by_pair.items()}
    return [by_pair[pair] for pair in _lexicographic_matching(weights)]


class MergeEntry(BaseModel):
    """One Merge Dictionary pair; ``context`` names the matched parents a child pair came from."""

    model_config = ConfigDict(frozen=True)

    left: XComponent
    right: XComponent
    rule: MergeRule
    context: Optional[tuple[str, str]] = None


class MergeDictionary(BaseModel):
    model_config = ConfigDict(frozen=True)

    severity: int = Field(ge=0)
    entries: tuple[MergeEntry, ...] = ()

    def pairs(self) -> set[tuple[XComponent, XComponent]]:
        return {(e.left, e.right) for e in self.entries}

    def name_pairs(self) -> set[tuple[str, str]]:
        return {(e.left.name, e.right.name) for e in self.entries}

    def contains(self, left: XComponent, right: XComponent) -> bool:
        return any(e.left == left and e.right == right for e in self.entries)

    def partner_of_left(self, left: XComponent) -> Optional[XComponent]:
        return next((e.right for e in self.entries if e.left == left), None)

    def partner_of_right(self, right: XComponent) -> Optional[XComponent]:
        return next((e.left for e in self.entries if e.right == right), None)

    def complex_entries(self) -> list[MergeEntry]:
        return [e for e in self.entries if e.left.is_complex]

    def __len__(self) -> int:
        return len(self.entries)

    def to_document(self) -> list[dict]:
        return [
            {
                "left": e.left.name,
                "left_typology": e.left.typology.value,
                "right": e.right.name,
                "right_typology": e.right.typology.value,
                "rule": e.rule,
                "context": list(e.context) if e.context else None,
            }
            for e in self.entries
        ]


class RenameEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: XComponent
    right: XComponent


class RenameDictionary(BaseModel):
    model_config = ConfigDict(frozen=True)

    severity: int = Field(default=0, ge=0)
    entries: tuple[RenameEntry, ...] = ()

    def pairs(self) -> set[tuple[XComponent, XComponent]]:
        return {(e.left, e.right) for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def to_document(self) -> list[dict]:
        return [
            {
                "left": e.left.name,
                "right": e.right.name,
                "typology": [e.left.typology.value, e.right.typology.value],
            }
            for e in self.entries
        ]


def _direct_components(model: SchemaModel, element: XComponent) -> list[XComponent]:
    """Attributes and simple sub-elements referenced by ``element`` itself."""
    found = [model.attribute(use.ref) for use in model.attributes_of(element)]
    for ref in model.children(element):
        child = model.element(ref.target)
        if not child.is_complex:
            found.append(child)
    return sorted_by_name(set(found))


def _reachable_components(graph: XsGraph, element: XComponent) -> list[XComponent]:
    return sorted_by_name(c for c in graph.cost_row(element) if not c.is_complex)


def _types_compatible(x1: XComponent, x2: XComponent) -> bool:
    return compatible(x1.data_type, x2.data_type)


def _child_candidates(
    matched: list[SimArc], s1: SchemaModel, s2: SchemaModel, g1: XsGraph, g2: XsGraph, t: Thesaurus
) -> dict[tuple[XComponent, XComponent], tuple[MergeRule, tuple[str, str]]]:
    candidates: dict[tuple[XComponent, XComponent], tuple[MergeRule, tuple[str, str]]] = {}
    for arc in matched:
        context = (arc.left.name, arc.right.name)
        for x1 in _direct_components(s1, arc.left):
            for x2 in _direct_components(s2, arc.right):
                if lexical_synonym(t, x1.name, x2.name) and _types_compatible(x1, x2):
                    rule = "same_name" if x1.key == x2.key and x1.typology is x2.typology else "thesaurus"
                    candidates.setdefault((x1, x2), (rule, context))
        # Equally named global declarations reached from merged structures are one declaration
        for x1 in _reachable_components(g1, arc.left):
            for x2 in _reachable_components(g2, arc.right):
                if x1.key == x2.key and x1.typology is x2.typology and _types_compatible(x1, x2):
                    candidates.setdefault((x1, x2), ("same_name", context))
    return candidates


def build_md(
    s1: SchemaModel,
    s2: SchemaModel,
    u: int,
    g1: XsGraph,
    g2: XsGraph,
    t: Thesaurus,
    simg: Optional[SimGraph] = None,
) -> MergeDictionary:
    """Merge Dictionary at severity ``u``: matched complex pairs plus their one-to-one children."""
    check_severity(u, s1, s2)
    if simg is None:
        simg = build_simg(s1, s2, u, g1, g2, t)
    matched = max_weight_matching(simg)
    entries = [MergeEntry(left=arc.left, right=arc.right, rule="synonymy") for arc in matched]

    candidates = _child_candidates(matched, s1, s2, g1, g2, t)
    # Cardinality first: the unit exceeds the typology bonus summed over any matching
    unit = len(candidates) + 1
    weights = {pair: unit + (1 if pair[0].typology is pair[1].typology else 0) for pair in candidates}
    chosen = _lexicographic_matching(weights)
    dropped = len(candidates) - len(chosen)
    if dropped:
        logger.debug(f"One-to-one filtering dropped {dropped} attribute/simple-element candidate(s)")

    for x1, x2 in chosen:
        rule, context = candidates[(x1, x2)]
        entries.append(MergeEntry(left=x1, right=x2, rule=rule, context=context))

    md = MergeDictionary(severity=u, entries=tuple(entries))
    logger.info(f"MD({u}): {len(matched)} complex pair(s), {len(chosen)} attribute/simple pair(s)")
    return md


def build_rd(s1: SchemaModel, s2: SchemaModel, u: int, md: MergeDictionary) -> RenameDictionary:
    """Equally named (case-insensitive) element/element or attribute/attribute pairs not in MD."""
    merged = md.pairs()
    entries = []
    for x1 in sorted_by_name(s1.components):
        for x2 in sorted_by_name(s2.components):
            if x1.key != x2.key or x1.typology.is_element != x2.typology.is_element:
                continue
            if (x1, x2) not in merged:
                entries.append(RenameEntry(left=x1, right=x2))
    logger.info(f"RD({u}): {len(entries)} pair(s)")
    return RenameDictionary(severity=u, entries=tuple(entries))
