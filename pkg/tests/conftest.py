import pytest
from fastapi.testclient import TestClient
from pathlib import Path

from xsdmerge.main import app
from xsdmerge.core.instance_reader import RefTargetMap, resolve_idrefs
from xsdmerge.core.pipeline import load_inputs
from xsdmerge.core.schema_model import parse_schema
from xsdmerge.core.thesaurus import load_thesaurus
from xsdmerge.core.xs_graph import build_xs_graph

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    """Keep XSDMERGE_* variables of the developer shell out of the tests"""
    for name in ("THESAURUS", "SEVERITY", "MAX_WORKERS", "ROOT_NAME", "RENAME_SUFFIX_START", "LOG_LEVEL"):
        monkeypatch.delenv(f"XSDMERGE_{name}", raising=False)


@pytest.fixture
def client():
    """Test client fixture for API testing"""
    return TestClient(app)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def s1_text():
    return (FIXTURES / "s1.xsd").read_bytes()


@pytest.fixture
def s2_text():
    return (FIXTURES / "s2.xsd").read_bytes()


@pytest.fixture
def s1_instance():
    return (FIXTURES / "s1_instance.xml").read_bytes()


@pytest.fixture
def s1(s1_text):
    """The shop schema"""
    return parse_schema(s1_text, "S1")


@pytest.fixture
def s2(s2_text):
    """The store schema"""
    return parse_schema(s2_text, "S2")


@pytest.fixture
def s_g():
    """Expected global schema of s1 + s2 at severity 0"""
    return parse_schema((FIXTURES / "s_g.xsd").read_bytes(), "expected")


@pytest.fixture
def thesaurus():
    return load_thesaurus(FIXTURES / "thesaurus.tsv")


@pytest.fixture
def g1(s1):
    return build_xs_graph(s1, RefTargetMap())


@pytest.fixture
def g2(s2):
    return build_xs_graph(s2, RefTargetMap())


@pytest.fixture
def g1_with_instances(s1, s1_instance):
    return build_xs_graph(s1, resolve_idrefs(s1, [s1_instance]))


@pytest.fixture
def inputs(s1_text, s2_text, thesaurus):
    """Parsed pair, graphs and thesaurus for the shop/store example"""
    return load_inputs(s1_text, s2_text, thesaurus=thesaurus)
