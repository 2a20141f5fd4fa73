import pytest

from xsdmerge.core.errors import InstanceParseError
from xsdmerge.core.instance_reader import RefTargetMap, resolve_idrefs


def shop_document(acquired_books: str) -> str:
    return f"""<shop>
  <customer SSN="1">
    <firstName>Ada</firstName><lastName>Byron</lastName><address>London</address>
    <gender>F</gender><birthDate>1815-12-10</birthDate><profession>analyst</profession>
    <bookAcquirement acquirementDate="2024-01-01" acquiredBooks="{acquired_books}"/>
  </customer>
  <book code="b1">
    <author>A</author><title>T</title><publisher>P</publisher><pubYear>1843</pubYear><genre>essay</genre>
  </book>
</shop>"""


class TestResolveIdrefs:
    """Tests for IDREF(S) target discovery over instance documents"""

    def test_fixture_instance(self, s1, s1_instance):
        """acquiredBooks points at book and acquiredMusics at music"""
        refmap = resolve_idrefs(s1, [s1_instance])
        assert refmap.targets_of("acquiredBooks") == frozenset({"book"})
        assert refmap.targets_of("acquiredMusics") == frozenset({"music"})
        assert refmap.documents_scanned == 1
        assert refmap.unresolved_references == 0
        assert refmap.instances_scanned > 0

    def test_no_documents(self, s1):
        """Without instances no target is known"""
        assert resolve_idrefs(s1, []) == RefTargetMap()
        assert resolve_idrefs(s1, []).targets_of("acquiredBooks") == frozenset()

    def test_unresolved_tokens_are_counted(self, s1):
        """IDREF tokens matching no ID are skipped and counted"""
        refmap = resolve_idrefs(s1, [shop_document("b1 b404")])
        assert refmap.targets_of("acquiredBooks") == frozenset({"book"})
        assert refmap.unresolved_references == 1

    def test_targets_are_merged_across_documents(self, s1, s1_instance):
        """Targets found in several documents are united"""
        refmap = resolve_idrefs(s1, [shop_document("b1"), s1_instance], max_workers=2)
        assert refmap.targets_of("acquiredBooks") == frozenset({"book"})
        assert refmap.targets_of("acquiredMusics") == frozenset({"music"})
        assert refmap.documents_scanned == 2

    def test_worker_count_does_not_change_result(self, s1, s1_instance):
        """Parallel scanning yields the same map as a serial scan"""
        documents = [s1_instance, shop_document("b1"), shop_document("b1 zz")]
        assert resolve_idrefs(s1, documents, max_workers=1) == resolve_idrefs(s1, documents, max_workers=3)

    def test_malformed_document_keeps_partial_result(self, s1, s1_instance):
        """A broken document is reported after the others were scanned"""
        with pytest.raises(InstanceParseError) as excinfo:
            resolve_idrefs(s1, [s1_instance, "<shop><customer>"])
        error = excinfo.value
        assert set(error.failed) == {1}
        assert error.partial.targets_of("acquiredBooks") == frozenset({"book"})
        assert error.partial.documents_scanned == 1
