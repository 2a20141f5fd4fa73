import pytest

from xsdmerge.core.data_types import compatible, merge_type
from xsdmerge.core.dictionaries import MergeDictionary, MergeEntry, RenameDictionary, build_md, build_rd
from xsdmerge.core.errors import IncompatibleTypes, InconsistentDictionary, NotMerged
from xsdmerge.core.instance_reader import RefTargetMap
from xsdmerge.core.integrator import (
    GLOBAL_SCHEMA_ID,
    integrate,
    integrate_with_audit,
    merge_complex,
    plan_merge,
)
from xsdmerge.core.schema_model import Compositor, parse_schema, root_element, serialize_schema
from xsdmerge.core.thesaurus import Thesaurus
from xsdmerge.core.xs_graph import build_xs_graph

WAREHOUSE = """<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="weight" type="xs:decimal"/>
  <xs:element name="item"><xs:complexType><xs:sequence>
    <xs:element ref="weight"/></xs:sequence></xs:complexType></xs:element>
  <xs:element name="warehouse"><xs:complexType><xs:sequence>
    <xs:element ref="item" maxOccurs="unbounded"/></xs:sequence></xs:complexType></xs:element>
</xs:schema>"""

LIBRARY = """<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="title" type="xs:string"/>
  <xs:element name="item"><xs:complexType><xs:sequence>
    <xs:element ref="title"/></xs:sequence></xs:complexType></xs:element>
  <xs:element name="library"><xs:complexType><xs:sequence>
    <xs:element ref="item" maxOccurs="unbounded"/></xs:sequence></xs:complexType></xs:element>
</xs:schema>"""

BOOK_WITH_ELEMENT = """<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:element name="title" type="xs:string"/>
  <xs:element name="year" type="xs:int"/>
  <xs:element name="book"><xs:complexType><xs:sequence>
    <xs:element ref="title"/><xs:element ref="year"/></xs:sequence></xs:complexType></xs:element>
</xs:schema>"""

BOOK_WITH_ATTRIBUTE = """<xs:schema xmlns:xs="http://www.w3.org/2001/XMLSchema">
  <xs:attribute name="year" type="xs:integer"/>
  <xs:element name="title" type="xs:string"/>
  <xs:element name="book"><xs:complexType><xs:sequence>
    <xs:element ref="title"/></xs:sequence><xs:attribute ref="year"/></xs:complexType></xs:element>
</xs:schema>"""


def dictionaries(a, b, u=0, t=None):
    t = t if t is not None else Thesaurus()
    md = build_md(a, b, u, build_xs_graph(a, RefTargetMap()), build_xs_graph(b, RefTargetMap()), t)
    return md, build_rd(a, b, u, md)


@pytest.fixture
def example_dictionaries(s1, s2, g1, g2, thesaurus):
    md = build_md(s1, s2, 0, g1, g2, thesaurus)
    return md, build_rd(s1, s2, 0, md)


class TestDataTypes:
    """Tests for data-type compatibility"""

    @pytest.mark.parametrize("t1,t2,expected", [
        ("byte", "int", "int"),
        ("int", "byte", "int"),
        ("string", "string", "string"),
        ("int", "integer", "integer"),
        ("unsignedByte", "short", "integer"),
        ("float", "double", "double"),
        ("NCName", "string", "string"),
        ("ID", "ID", "ID"),
    ])
    def test_merge_type(self, t1, t2, expected):
        assert merge_type(t1, t2) == expected

    @pytest.mark.parametrize("t1,t2", [("int", "date"), ("ID", "string"), ("boolean", "int"), ("double", "decimal")])
    def test_incompatible(self, t1, t2):
        """Types without a common generalization cannot merge"""
        assert not compatible(t1, t2)
        with pytest.raises(IncompatibleTypes):
            merge_type(t1, t2)


class TestMergeComplex:
    """Tests for merge_complex"""

    def test_customer_client(self, s1, s2, example_dictionaries):
        """S1 refs first, then client-only refs, which become optional"""
        md, _ = example_dictionaries
        merged = merge_complex(s1, s2, s1.find("customer"), s2.find("client"), md)
        assert merged.name == "customer"
        assert [r.target for r in merged.child_refs] == [
            "firstName", "lastName", "address", "gender", "birthDate", "profession",
            "bookAcquirement", "musicAcquirement", "phone", "email", "CDDAPurchase", "miniDiskPurchase",
        ]
        occurs = {r.target: (r.min_occurs, r.max_occurs) for r in merged.child_refs}
        assert occurs["firstName"] == (1, 1)
        assert occurs["gender"] == (0, 1)
        assert occurs["phone"] == (0, "unbounded")
        assert [(a.ref, a.required) for a in merged.attribute_uses] == [("SSN", True)]

    def test_music_composition(self, s1, s2, example_dictionaries):
        """year collapses into pubYear and code becomes optional"""
        md, _ = example_dictionaries
        merged = merge_complex(s1, s2, s1.find("music"), s2.find("composition"), md)
        assert [r.target for r in merged.child_refs] == [
            "artist", "title", "pubYear", "genre", "support", "song", "CDDA", "miniDisk",
        ]
        occurs = {r.target: (r.min_occurs, r.max_occurs) for r in merged.child_refs}
        assert occurs["artist"] == (1, "unbounded")
        assert occurs["pubYear"] == (1, 1)
        assert occurs["support"] == (0, 1)
        assert [(a.ref, a.required) for a in merged.attribute_uses] == [("code", False)]
        assert merged.compositor is Compositor.SEQUENCE

    def test_not_merged(self, s1, s2, example_dictionaries):
        """Pairs outside the Merge Dictionary are rejected"""
        md, _ = example_dictionaries
        with pytest.raises(NotMerged):
            merge_complex(s1, s2, s1.find("customer"), s2.find("composition"), md)
        with pytest.raises(NotMerged):
            merge_complex(s1, s2, s1.find("title"), s2.find("title"), md)


class TestIntegrate:
    """Tests for integrate"""

    def test_example(self, s1, s2, s_g, example_dictionaries):
        """The shop and store schemas integrate into the expected global schema"""
        md, rd = example_dictionaries
        result = integrate(s1, s2, md, rd)
        assert result.schema_id == GLOBAL_SCHEMA_ID
        assert result.structurally_equal(s_g)
        assert root_element(result).name == "shop"
        assert result.find("pubYear").data_type == "integer"
        assert result.element("year") is None

    def test_serializes(self, s1, s2, s_g, example_dictionaries):
        """The global schema survives a serialize/parse cycle"""
        md, rd = example_dictionaries
        text = serialize_schema(integrate(s1, s2, md, rd))
        assert parse_schema(text, "again").structurally_equal(s_g)

    def test_self_integration(self, s1_text):
        """Integrating a schema with a copy of itself gives the same schema"""
        left, right = parse_schema(s1_text, "S1"), parse_schema(s1_text, "S1b")
        md, rd = dictionaries(left, right)
        assert len(rd) == 0
        assert integrate(left, right, md, rd).structurally_equal(left)

    def test_unmerged_roots_get_a_fresh_root(self):
        """Homonymous item elements are renamed and both roots hang under a new root"""
        a, b = parse_schema(WAREHOUSE, "A"), parse_schema(LIBRARY, "B")
        md, rd = dictionaries(a, b)
        result = integrate(a, b, md, rd)
        root = root_element(result)
        assert root.name == "root"
        assert result.compositor_of(root) is Compositor.ALL
        assert [(r.target, r.min_occurs, r.max_occurs) for r in result.children(root)] == [
            ("warehouse", 0, 1), ("library", 0, 1),
        ]
        assert [r.target for r in result.children(result.find("library"))] == ["item_2"]
        assert [r.target for r in result.children(result.find("item_2"))] == ["title"]
        assert [r.target for r in result.children(result.find("item"))] == ["weight"]

    def test_root_name_collision(self):
        """A root name already in use gets a numeric suffix"""
        a, b = parse_schema(WAREHOUSE, "A"), parse_schema(LIBRARY, "B")
        md, rd = dictionaries(a, b)
        assert root_element(integrate(a, b, md, rd, root_name="item")).name == "item_3"
        assert root_element(integrate(a, b, md, rd, root_name="catalog")).name == "catalog"

    def test_rename_suffix_start(self):
        """The first rename suffix is configurable"""
        a, b = parse_schema(WAREHOUSE, "A"), parse_schema(LIBRARY, "B")
        md, rd = dictionaries(a, b)
        result = integrate(a, b, md, rd, rename_suffix_start=5)
        assert result.element("item_5") is not None

    def test_element_absorbs_attribute(self):
        """A simple element paired with an attribute takes over its content"""
        a, b = parse_schema(BOOK_WITH_ELEMENT, "A"), parse_schema(BOOK_WITH_ATTRIBUTE, "B")
        md, rd = dictionaries(a, b)
        assert ("year", "year") in md.name_pairs()
        integration = integrate_with_audit(a, b, md, rd)
        result = integration.schema_model
        assert result.find("year").data_type == "integer"
        assert not result.attributes_of(result.find("book"))
        assert [(r.target, r.min_occurs) for r in result.children(result.find("book"))] == [("title", 1), ("year", 0)]
        actions = {(row["schema"], row["name"]): row["action"] for row in integration.audit_document()}
        assert actions[("B", "year")] == "absorbed"
        assert actions[("A", "year")] == "merged"


class TestInconsistentDictionaries:
    """Tests for dictionary checks before integration"""

    def test_foreign_component(self, s1, s2):
        """MD members must belong to their schemas"""
        md = MergeDictionary(severity=0, entries=(
            MergeEntry(left=s2.find("client"), right=s2.find("client"), rule="synonymy"),
        ))
        with pytest.raises(InconsistentDictionary):
            integrate(s1, s2, md, RenameDictionary())

    def test_not_one_to_one(self, s1, s2):
        """A component merged twice is rejected"""
        md = MergeDictionary(severity=0, entries=(
            MergeEntry(left=s1.find("customer"), right=s2.find("client"), rule="synonymy"),
            MergeEntry(left=s1.find("customer"), right=s2.find("store"), rule="synonymy"),
        ))
        with pytest.raises(InconsistentDictionary):
            plan_merge(s1, s2, md, RenameDictionary())

    def test_complex_with_simple(self, s1, s2):
        """A complex element cannot merge with a simple element"""
        md = MergeDictionary(severity=0, entries=(
            MergeEntry(left=s1.find("customer"), right=s2.find("title"), rule="synonymy"),
        ))
        with pytest.raises(InconsistentDictionary):
            plan_merge(s1, s2, md, RenameDictionary())


class TestAudit:
    """Tests for the audit mapping"""

    def test_example_actions(self, s1, s2, example_dictionaries):
        """Every source component maps to its place in the global schema"""
        md, rd = example_dictionaries
        rows = integrate_with_audit(s1, s2, md, rd).audit_document()
        assert len(rows) == len(s1.components) + len(s2.components)
        by_source = {(row["schema"], row["name"], row["typology"]): row for row in rows}
        assert by_source[("S2", "client", "ComplexElement")]["target"] == "customer"
        assert by_source[("S2", "client", "ComplexElement")]["action"] == "merged"
        assert by_source[("S2", "year", "SimpleElement")]["target"] == "pubYear"
        assert by_source[("S2", "phone", "SimpleElement")]["action"] == "kept"
        assert by_source[("S1", "book", "ComplexElement")]["action"] == "kept"

    def test_renamed_action(self):
        """The S2 side of a Rename Dictionary pair is reported as renamed"""
        a, b = parse_schema(WAREHOUSE, "A"), parse_schema(LIBRARY, "B")
        md, rd = dictionaries(a, b)
        rows = integrate_with_audit(a, b, md, rd).audit_document()
        row = next(r for r in rows if r["schema"] == "B" and r["name"] == "item")
        assert row == {"schema": "B", "name": "item", "typology": "ComplexElement", "target": "item_2", "action": "renamed"}
