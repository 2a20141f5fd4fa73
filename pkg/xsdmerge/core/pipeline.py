"""
End-to-end orchestration shared by the CLI and the HTTP routes.

load_inputs parses both schemas, scans their instance documents, builds the XS-Graphs and picks
up the thesaurus; run_match and run_integration take it from there.
"""

import logging
from typing import Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict

from xsdmerge.core.dictionaries import MergeDictionary, RenameDictionary, build_md, build_rd, build_simg
from xsdmerge.core.errors import InstanceParseError
from xsdmerge.core.instance_reader import RefTargetMap, resolve_idrefs
from xsdmerge.core.integrator import Integration, integrate_with_audit
from xsdmerge.core.interscheme import PropertySet, check_severity, extract_properties, max_severity
from xsdmerge.core.schema_model import SchemaModel, parse_schema, serialize_schema
from xsdmerge.core.thesaurus import Thesaurus
from xsdmerge.core.xs_graph import XsGraph, build_xs_graph

logger = logging.getLogger(__name__)

Text = Union[str, bytes]


class MatchInputs(BaseModel):
    """Everything the matcher needs about one schema pair."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    s1: SchemaModel
    s2: SchemaModel
    refmap1: RefTargetMap
    refmap2: RefTargetMap
    g1: XsGraph
    g2: XsGraph
    thesaurus: Thesaurus
    max_workers: int = 1

    @property
    def max_severity(self) -> int:
        return max_severity(self.s1, self.s2)


def _scan(model: SchemaModel, documents: Sequence[Text], max_workers: int) -> RefTargetMap:
    try:
        return resolve_idrefs(model, documents, max_workers=max_workers)
    except InstanceParseError as e:
        # Keep going with what the readable documents gave
        logger.warning(f"Continuing with IDREF targets from readable instances of '{model.schema_id}': {e}")
        return e.partial


def load_inputs(
    schema1: Text,
    schema2: Text,
    thesaurus: Optional[Thesaurus] = None,
    instances1: Sequence[Text] = (),
    instances2: Sequence[Text] = (),
    schema_ids: tuple[str, str] = ("S1", "S2"),
    max_workers: int = 1,
) -> MatchInputs:
    s1 = parse_schema(schema1, schema_ids[0])
    s2 = parse_schema(schema2, schema_ids[1])
    logger.info(
        f"Parsed '{s1.schema_id}' ({len(s1.components)} components) and "
        f"'{s2.schema_id}' ({len(s2.components)} components)"
    )
    refmap1 = _scan(s1, instances1, max_workers)
    refmap2 = _scan(s2, instances2, max_workers)
    return MatchInputs(
        s1=s1,
        s2=s2,
        refmap1=refmap1,
        refmap2=refmap2,
        g1=build_xs_graph(s1, refmap1),
        g2=build_xs_graph(s2, refmap2),
        thesaurus=thesaurus if thesaurus is not None else Thesaurus(),
        max_workers=max_workers,
    )


class MatchResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    properties: PropertySet
    merge_dictionary: Optional[MergeDictionary] = None
    rename_dictionary: Optional[RenameDictionary] = None

    def to_document(self) -> dict:
        document = self.properties.to_document()
        if self.merge_dictionary is not None:
            document["merge_dictionary"] = self.merge_dictionary.to_document()
        if self.rename_dictionary is not None:
            document["rename_dictionary"] = self.rename_dictionary.to_document()
        return document


def build_dictionaries(inputs: MatchInputs, u: int) -> tuple[MergeDictionary, RenameDictionary]:
    simg = build_simg(inputs.s1, inputs.s2, u, inputs.g1, inputs.g2, inputs.thesaurus)
    md = build_md(inputs.s1, inputs.s2, u, inputs.g1, inputs.g2, inputs.thesaurus, simg=simg)
    rd = build_rd(inputs.s1, inputs.s2, u, md)
    return md, rd


def run_match(inputs: MatchInputs, u: int, with_dictionaries: bool = False) -> MatchResult:
    check_severity(u, inputs.s1, inputs.s2)
    properties = extract_properties(
        inputs.s1, inputs.s2, u, inputs.g1, inputs.g2, inputs.thesaurus, max_workers=inputs.max_workers,
    )
    if not with_dictionaries:
        return MatchResult(properties=properties)
    md, rd = build_dictionaries(inputs, u)
    return MatchResult(properties=properties, merge_dictionary=md, rename_dictionary=rd)


class IntegrationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    integration: Integration
    merge_dictionary: MergeDictionary
    rename_dictionary: RenameDictionary

    @property
    def schema_model(self) -> SchemaModel:
        return self.integration.schema_model

    def schema_text(self) -> str:
        return serialize_schema(self.integration.schema_model)


def run_integration(
    inputs: MatchInputs, u: int, root_name: str = "root", rename_suffix_start: int = 2
) -> IntegrationResult:
    check_severity(u, inputs.s1, inputs.s2)
    md, rd = build_dictionaries(inputs, u)
    integration = integrate_with_audit(
        inputs.s1, inputs.s2, md, rd, root_name=root_name, rename_suffix_start=rename_suffix_start,
    )
    return IntegrationResult(integration=integration, merge_dictionary=md, rename_dictionary=rd)
