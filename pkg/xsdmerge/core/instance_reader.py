"""
IDREF/IDREFS resolution over XML instance documents.

Neither the schema nor the attribute declaration says which element an IDREF(S) attribute points
at, so the instances are scanned: ID values are indexed per document in a hash map, then every
IDREF token is looked up and the declaration name of the referenced element is recorded.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence, Union

from lxml import etree
from pydantic import BaseModel, ConfigDict, Field

from xsdmerge.core.errors import InstanceParseError
from xsdmerge.core.schema_model import ID_REF_TYPES, SchemaModel, Typology

logger = logging.getLogger(__name__)


class RefTargetMap(BaseModel):
    """Which complex elements each IDREF/IDREFS attribute was seen referring to."""

    model_config = ConfigDict(frozen=True)

    targets: dict[str, frozenset[str]] = Field(default_factory=dict)
    instances_scanned: int = 0
    documents_scanned: int = 0
    unresolved_references: int = 0

    def targets_of(self, attribute_name: str) -> frozenset[str]:
        return self.targets.get(attribute_name, frozenset())


class _DocumentScan(BaseModel):
    targets: dict[str, set[str]] = Field(default_factory=dict)
    instances: int = 0
    unresolved: int = 0


def _scan_document(
    model: SchemaModel, text: Union[str, bytes], id_attributes: set[str], ref_attributes: set[str]
) -> _DocumentScan:
    data = text.encode("utf-8") if isinstance(text, str) else text
    parser = etree.XMLParser(resolve_entities=False, no_network=True)
    root = etree.fromstring(data, parser)

    scan = _DocumentScan()
    id_index: dict[str, str] = {}
    ref_sites: list[tuple[str, str]] = []
    for node in root.iter(etree.Element):
        scan.instances += 1
        element_name = etree.QName(node).localname
        for raw_name, value in node.attrib.items():
            attribute_name = etree.QName(raw_name).localname
            if attribute_name in id_attributes:
                id_index.setdefault(value.strip(), element_name)
            elif attribute_name in ref_attributes:
                ref_sites.append((attribute_name, value))

    for attribute_name, value in ref_sites:
        for token in value.split():
            element_name = id_index.get(token)
            if element_name is None or model.lookup(element_name, Typology.COMPLEX_ELEMENT) is None:
                scan.unresolved += 1
                continue
            scan.targets.setdefault(attribute_name, set()).add(element_name)
    return scan


def resolve_idrefs(
    model: SchemaModel, documents: Sequence[Union[str, bytes]], max_workers: int = 1
) -> RefTargetMap:
    """Scan instance documents of ``model`` and record IDREF(S) targets per attribute.

    Malformed documents do not stop the scan; once every document has been processed an
    InstanceParseError carrying the partial map is raised.
    """
    if not documents:
        return RefTargetMap()

    id_attributes = {
        c.name for c in model.components
        if c.typology is Typology.ATTRIBUTE and c.data_type == "ID"
    }
    ref_attributes = {
        c.name for c in model.components
        if c.typology is Typology.ATTRIBUTE and c.data_type in ID_REF_TYPES
    }

    def scan(indexed: tuple[int, Union[str, bytes]]):
        index, text = indexed
        try:
            return index, _scan_document(model, text, id_attributes, ref_attributes), None
        except etree.XMLSyntaxError as e:
            return index, None, str(e)

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        results = list(pool.map(scan, enumerate(documents)))

    merged: dict[str, set[str]] = {}
    failed: dict[int, str] = {}
    instances = 0
    unresolved = 0
    for index, document_scan, error in results:
        if error is not None:
            logger.warning(f"Instance document {index} for schema '{model.schema_id}' is malformed: {error}")
            failed[index] = error
            continue
        instances += document_scan.instances
        unresolved += document_scan.unresolved
        for attribute_name, names in document_scan.targets.items():
            merged.setdefault(attribute_name, set()).update(names)

    if unresolved:
        logger.warning(f"{unresolved} IDREF value(s) in instances of '{model.schema_id}' matched no ID")

    result = RefTargetMap(
        targets={name: frozenset(merged[name]) for name in sorted(merged)},
        instances_scanned=instances,
        documents_scanned=len(documents) - len(failed),
        unresolved_references=unresolved,
    )
    logger.debug(f"Resolved IDREF targets for '{model.schema_id}': {result.targets}")
    if failed:
        raise InstanceParseError(failed, partial=result)
    return result
