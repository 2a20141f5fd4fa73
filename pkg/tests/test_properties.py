"""
Randomized checks on small generated schemas.

Every generated schema is referenced-style, has at most 15 components, references every
component it declares and has a single root.
"""

import itertools
import math
import random
from fractions import Fraction

import networkx as nx
import pytest

from xsdmerge.core.dictionaries import SimArc, SimGraph, build_md, build_rd, max_weight_matching
from xsdmerge.core.instance_reader import RefTargetMap
from xsdmerge.core.integrator import integrate
from xsdmerge.core.interscheme import BipartiteGraph, max_severity, phi, synonymous
from xsdmerge.core.schema_model import Typology, XComponent, parse_schema, serialize_schema
from xsdmerge.core.thesaurus import Thesaurus
from xsdmerge.core.xs_graph import build_xs_graph, connection_cost, neighborhood

SEEDS = range(100)
SELF_SEEDS = range(50)

COMPLEX_NAMES = ["order", "item", "client", "shop", "entry"]
SIMPLE_NAMES = ["name", "title", "price", "date", "code", "note", "label", "year"]
ATTRIBUTE_NAMES = ["id", "code", "date", "lang"]
DATA_TYPES = ["string", "int", "integer", "date"]


def random_schema(seed: int) -> str:
    rng = random.Random(seed)
    complex_names = COMPLEX_NAMES[: rng.randint(1, 4)]
    simple_names = rng.sample(SIMPLE_NAMES, len(complex_names) + rng.randint(0, 3))
    attribute_names = rng.sample(ATTRIBUTE_NAMES, rng.randint(0, 3))

    refs = {name: [] for name in complex_names}
    uses = {name: [] for name in complex_names}
    # Each complex element below the root hangs from an earlier one, so the first is the only root
    for i, name in enumerate(complex_names[1:], start=1):
        refs[complex_names[rng.randrange(i)]].append(name)
    for i, name in enumerate(simple_names):
        owner = complex_names[i] if i < len(complex_names) else rng.choice(complex_names)
        refs[owner].append(name)
    for name in attribute_names:
        uses[rng.choice(complex_names)].append(name)

    lines = ['<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">']
    for name in attribute_names:
        lines.append(f'  <xs:attribute name="{name}" type="xs:{rng.choice(DATA_TYPES)}"/>')
    for name in simple_names:
        lines.append(f'  <xs:element name="{name}" type="xs:{rng.choice(DATA_TYPES)}"/>')
    for name in complex_names:
        lines.append(f'  <xs:element name="{name}"><xs:complexType>')
        lines.append("    <xs:sequence>")
        for target in refs[name]:
            lines.append(f'      <xs:element ref="{target}" maxOccurs="{rng.choice(["1", "unbounded"])}"/>')
        lines.append("    </xs:sequence>")
        for ref in uses[name]:
            lines.append(f'    <xs:attribute ref="{ref}"/>')
        lines.append("  </xs:complexType></xs:element>")
    lines.append("</xs:schema>")
    return "\n".join(lines)


def graph_of(model):
    return build_xs_graph(model, RefTargetMap())


def brute_force_cost(graph, x, y):
    if x == y:
        return 0
    costs = [
        sum(graph.arc_cost(a, b) for a, b in zip(path, path[1:]))
        for path in nx.all_simple_paths(graph.graph, x, y)
    ]
    return min(costs, default=math.inf)


def random_simg(seed: int) -> SimGraph:
    rng = random.Random(seed)
    left = tuple(
        XComponent(name=f"l{i}", typology=Typology.COMPLEX_ELEMENT, schema_id="L") for i in range(rng.randint(1, 5))
    )
    right = tuple(
        XComponent(name=f"r{i}", typology=Typology.COMPLEX_ELEMENT, schema_id="R") for i in range(rng.randint(1, 5))
    )
    arcs = tuple(
        SimArc(left=a, right=b, weight=Fraction(rng.choice([3, 4]), 5))
        for a in left for b in right if rng.random() < 0.6
    )
    return SimGraph(severity=0, left=left, right=right, arcs=arcs)


def brute_force_matching(graph: SimGraph) -> tuple[Fraction, list[tuple[str, str]]]:
    """Best total and, among matchings reaching it, the smallest sorted name sequence."""
    weights = {(arc.left, arc.right): arc.weight for arc in graph.arcs}
    slots = list(graph.right) + [None] * len(graph.left)
    found = []
    for choice in itertools.permutations(slots, len(graph.left)):
        pairs = [(a, b) for a, b in zip(graph.left, choice) if b is not None and (a, b) in weights]
        total = sum((weights[pair] for pair in pairs), Fraction(0))
        found.append((total, sorted((a.name, b.name) for a, b in pairs)))
    best = max(total for total, _ in found)
    return best, min(names for total, names in found if total == best)


class TestGeneratedSchemas:
    """Structural properties on generated schemas"""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_round_trip(self, seed):
        model = parse_schema(random_schema(seed), "R")
        assert len(model.components) <= 15
        assert parse_schema(serialize_schema(model), "again").structurally_equal(model)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_neighborhoods_grow_with_level(self, seed):
        model = parse_schema(random_schema(seed), "R")
        graph = graph_of(model)
        for x in model.complex_elements():
            levels = [neighborhood(graph, x, j) for j in range(4)]
            assert all(a <= b for a, b in zip(levels, levels[1:]))
            assert x in levels[0]

    @pytest.mark.parametrize("seed", SEEDS)
    def test_connection_cost_is_cheapest_path(self, seed):
        model = parse_schema(random_schema(seed), "R")
        graph = graph_of(model)
        for x in model.components:
            for y in model.components:
                assert connection_cost(graph, x, y) == brute_force_cost(graph, x, y)


class TestMatchingOracle:
    """max_weight_matching against exhaustive search"""

    @pytest.mark.parametrize("seed", range(20))
    def test_weight_and_tie_break(self, seed):
        graph = random_simg(seed)
        chosen = max_weight_matching(graph)
        assert len({arc.left for arc in chosen}) == len(chosen)
        assert len({arc.right for arc in chosen}) == len(chosen)
        assert len(chosen) <= min(len(graph.left), len(graph.right))
        best, names = brute_force_matching(graph)
        assert sum(arc.weight for arc in chosen) == best
        assert [(arc.left.name, arc.right.name) for arc in chosen] == names


class TestMatchingProperties:
    """Severity and integration properties across generated pairs"""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_severity_monotonicity(self, seed):
        s1 = parse_schema(random_schema(seed), "A")
        s2 = parse_schema(random_schema(seed + 100), "B")
        g1, g2 = graph_of(s1), graph_of(s2)
        t = Thesaurus()
        for u in range(1, max_severity(s1, s2) + 1):
            for e1 in s1.complex_elements():
                for e2 in s2.complex_elements():
                    if synonymous(e1, e2, u, g1, g2, t):
                        assert synonymous(e1, e2, u - 1, g1, g2, t)

    @pytest.mark.parametrize("seed", SELF_SEEDS)
    def test_self_integration_is_idempotent(self, seed):
        text = random_schema(seed)
        left, right = parse_schema(text, "A"), parse_schema(text, "B")
        md = build_md(left, right, 0, graph_of(left), graph_of(right), Thesaurus())
        rd = build_rd(left, right, 0, md)
        assert len(rd) == 0
        assert integrate(left, right, md, rd).structurally_equal(left)


def random_name_sets(seed: int):
    rng = random.Random(seed)
    pool = ["id", "name", "title", "code", "note", "year", "date", "label"]

    def side(schema_id):
        names = rng.sample(pool, rng.randint(1, 5))
        return [XComponent(name=n, typology=Typology.SIMPLE_ELEMENT, data_type="string", schema_id=schema_id)
                for n in names]

    thesaurus = Thesaurus.from_pairs([("id", "code"), ("year", "date"), ("note", "label")])
    return side("L"), side("R"), thesaurus


def brute_force_matching_size(graph: BipartiteGraph) -> int:
    arcs = set(graph.arcs)
    slots = list(graph.right) + [None] * len(graph.left)
    best = 0
    for choice in itertools.permutations(slots, len(graph.left)):
        best = max(best, sum(1 for a, b in zip(graph.left, choice) if b is not None and (a, b) in arcs))
    return best


class TestPhiOracle:
    """Neighborhood similarity against exhaustive search"""

    @pytest.mark.parametrize("seed", range(40))
    def test_matching_size(self, seed):
        left, right, thesaurus = random_name_sets(seed)
        graph = BipartiteGraph(left, right, thesaurus)
        assert len(graph.maximum_matching()) == brute_force_matching_size(graph)

    @pytest.mark.parametrize("seed", range(40))
    def test_symmetric_and_bounded(self, seed):
        left, right, thesaurus = random_name_sets(seed)
        value = phi(left, right, thesaurus)
        assert 0 <= value <= 1
        assert value == phi(right, left, thesaurus)


class TestTriangle:
    """Connection costs obey the triangle inequality"""

    @pytest.mark.parametrize("seed", range(30))
    def test_triangle_inequality(self, seed):
        model = parse_schema(random_schema(seed), "R")
        graph = graph_of(model)
        for x in model.components:
            for y in model.components:
                for z in model.components:
                    xy, yz = connection_cost(graph, x, y), connection_cost(graph, y, z)
                    if xy != math.inf and yz != math.inf:
                        assert connection_cost(graph, x, z) <= xy + yz
