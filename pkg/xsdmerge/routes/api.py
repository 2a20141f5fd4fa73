from xsdmerge.configuration import Configuration
from xsdmerge.core.errors import SeverityOutOfRange, XsdMergeError
from xsdmerge.core.instance_reader import resolve_idrefs
from xsdmerge.core.pipeline import load_inputs, run_integration, run_match
from xsdmerge.core.schema_model import Typology, parse_schema
from xsdmerge.core.thesaurus import Thesaurus, load_thesaurus, parse_thesaurus
from xsdmerge.core.xs_graph import build_xs_graph, neighborhood, sorted_by_name
from xsdmerge.services.evaluation import GoldStandard, evaluate
from xsdmerge.utils.data_validation import (
    INSTANCE_SUFFIXES,
    JSON_SUFFIXES,
    SCHEMA_SUFFIXES,
    THESAURUS_SUFFIXES,
    validate_file_kind,
    validate_uploaded_schemas,
)

from fastapi import UploadFile, File, Form, APIRouter, HTTPException
import json
import logging
from typing import List, Optional


logger = logging.getLogger(__name__)

router = APIRouter()


async def read_upload(upload: UploadFile, suffixes, field: str) -> bytes:
    error = validate_file_kind(upload.filename, suffixes, field)
    if error:
        raise HTTPException(status_code=400, detail=error)
    return await upload.read()


def parse_level(raw: Optional[str], default: int, field: str) -> int:
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise HTTPException(status_code=400, detail=f"Invalid {field}: must be an integer")
    if value < 0:
        raise HTTPException(status_code=400, detail=f"{field} cannot be negative")
    return value


async def resolve_thesaurus(upload: Optional[UploadFile], config: Configuration) -> Thesaurus:
    if upload is not None and upload.filename:
        content = await read_upload(upload, THESAURUS_SUFFIXES, "thesaurus")
        return parse_thesaurus(content.decode("utf-8"), source=upload.filename)
    if config.thesaurus:
        return load_thesaurus(config.thesaurus)
    return Thesaurus()


async def read_instances(uploads: Optional[List[UploadFile]], field: str) -> list[bytes]:
    documents = []
    for upload in uploads or []:
        if not upload.filename:
            continue
        documents.append(await read_upload(upload, INSTANCE_SUFFIXES, field))
    return documents


async def read_schema_pair(schema1: UploadFile, schema2: UploadFile) -> tuple[bytes, bytes]:
    text1 = await read_upload(schema1, SCHEMA_SUFFIXES, "schema1")
    text2 = await read_upload(schema2, SCHEMA_SUFFIXES, "schema2")
    schemas_valid, schema_errors = validate_uploaded_schemas(text1, text2)
    if not schemas_valid:
        raise HTTPException(status_code=400, detail=f"Schema validation failed: {'; '.join(schema_errors)}")
    return text1, text2


def domain_error(endpoint: str, e: XsdMergeError) -> HTTPException:
    logger.warning(f"{endpoint} rejected input: {e}")
    if isinstance(e, SeverityOutOfRange):
        return HTTPException(status_code=422, detail=str(e))
    return HTTPException(status_code=400, detail=str(e))


@router.post("/match")
async def match(
    schema1: UploadFile = File(..., description="First referenced-style XML Schema"),
    schema2: UploadFile = File(..., description="Second referenced-style XML Schema"),
    thesaurus: Optional[UploadFile] = File(None, description="TSV thesaurus of synonymous terms"),
    instances1: Optional[List[UploadFile]] = File(None, description="XML instances of schema1"),
    instances2: Optional[List[UploadFile]] = File(None, description="XML instances of schema2"),
    severity: Optional[str] = Form(None),
    dictionaries: bool = Form(False),
):
    try:
        config = Configuration.from_environment()
        u = parse_level(severity, config.severity, "severity")
        text1, text2 = await read_schema_pair(schema1, schema2)

        inputs = load_inputs(
            text1,
            text2,
            thesaurus=await resolve_thesaurus(thesaurus, config),
            instances1=await read_instances(instances1, "instances1"),
            instances2=await read_instances(instances2, "instances2"),
            max_workers=config.max_workers,
        )
        result = run_match(inputs, u, with_dictionaries=dictionaries)
        logger.info(f"/match at severity {u}: {len(result.properties.synonymies)} synonymies")
        return result.to_document()

    except HTTPException:
        raise
    except XsdMergeError as e:
        raise domain_error("/match", e)
    except Exception as e:
        logger.error(f"/match failed: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"match failed: {e}")


@router.post("/integrate")
async def integrate(
    schema1: UploadFile = File(..., description="First referenced-style XML Schema"),
    schema2: UploadFile = File(..., description="Second referenced-style XML Schema"),
    thesaurus: Optional[UploadFile] = File(None, description="TSV thesaurus of synonymous terms"),
    instances1: Optional[List[UploadFile]] = File(None, description="XML instances of schema1"),
    instances2: Optional[List[UploadFile]] = File(None, description="XML instances of schema2"),
    severity: Optional[str] = Form(None),
    root_name: Optional[str] = Form(None),
):
    try:
        config = Configuration.from_environment(root_name=root_name or None)
        u = parse_level(severity, config.severity, "severity")
        text1, text2 = await read_schema_pair(schema1, schema2)

        inputs = load_inputs(
            text1,
            text2,
            thesaurus=await resolve_thesaurus(thesaurus, config),
            instances1=await read_instances(instances1, "instances1"),
            instances2=await read_instances(instances2, "instances2"),
            max_workers=config.max_workers,
        )
        result = run_integration(
            inputs, u, root_name=config.root_name, rename_suffix_start=config.rename_suffix_start,
        )
        return {
            "schema": result.schema_text(),
            "audit": result.integration.audit_document(),
        }

    except HTTPException:
        raise
    except XsdMergeError as e:
        raise domain_error("/integrate", e)
    except Exception as e:
        logger.error(f"/integrate failed: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"integrate failed: {e}")


@router.post("/neighborhood")
async def component_neighborhood(
    schema: UploadFile = File(..., description="Referenced-style XML Schema"),
    component: str = Form(...),
    j: str = Form("0"),
    typology: Optional[str] = Form(None),
    instances: Optional[List[UploadFile]] = File(None, description="XML instances of the schema"),
):
    try:
        level = parse_level(j, 0, "j")
        try:
            wanted = Typology(typology) if typology else None
        except ValueError:
            raise HTTPException(status_code=400, detail=f"Unknown typology '{typology}'")

        model = parse_schema(await read_upload(schema, SCHEMA_SUFFIXES, "schema"), "S")
        refmap = resolve_idrefs(model, await read_instances(instances, "instances"))
        graph = build_xs_graph(model, refmap)
        x = model.find(component, wanted)
        members = sorted_by_name(neighborhood(graph, x, level))
        return {
            "component": x.name,
            "typology": x.typology.value,
            "level": level,
            "neighborhood": [{"name": c.name, "typology": c.typology.value} for c in members],
        }

    except HTTPException:
        raise
    except XsdMergeError as e:
        raise domain_error("/neighborhood", e)
    except Exception as e:
        logger.error(f"/neighborhood failed: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"neighborhood failed: {e}")


@router.post("/eval")
async def eval_properties(
    properties: UploadFile = File(..., description="Match output JSON"),
    gold: UploadFile = File(..., description="Gold standard JSON"),
):
    try:
        documents = {}
        for field, upload in (("properties", properties), ("gold", gold)):
            content = await read_upload(upload, JSON_SUFFIXES, field)
            try:
                documents[field] = json.loads(content)
            except json.JSONDecodeError as e:
                raise HTTPException(status_code=400, detail=f"Invalid {field} JSON: {str(e)}")

        report = evaluate(
            GoldStandard.from_document(documents["properties"], "properties"),
            GoldStandard.from_document(documents["gold"], "gold"),
        )
        return {**report.model_dump(), "correctness_display": f"{report.correctness:.2f}",
                "completeness_display": f"{report.completeness:.2f}"}

    except HTTPException:
        raise
    except XsdMergeError as e:
        raise domain_error("/eval", e)
    except Exception as e:
        logger.error(f"/eval failed: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"eval failed: {e}")
