from pathlib import Path
from typing import Any, List, Optional, Tuple

from lxml import etree

from xsdmerge.core.schema_model import XSD_NAMESPACE

SCHEMA_SUFFIXES = (".xsd",)
INSTANCE_SUFFIXES = (".xml",)
THESAURUS_SUFFIXES = (".tsv", ".txt")
JSON_SUFFIXES = (".json",)

PROPERTY_KINDS = ("synonymies", "homonymies")


def validate_file_kind(filename: Optional[str], suffixes: Tuple[str, ...], field: str) -> Optional[str]:
    """
    Check an uploaded or command-line file name against the accepted suffixes

    Returns:
        None when the name is acceptable, otherwise the error message
    """
    if not filename:
        return f"{field} has no file name"
    if Path(filename).suffix.lower() not in suffixes:
        kinds = " or ".join(s.lstrip(".").upper() for s in suffixes)
        return f"{field} must be a {kinds} file"
    return None


def validate_schema_text(content: bytes, file_name: str) -> Tuple[bool, List[str]]:
    """
    Pre-check before the full parse: well-formed XML whose root is xs:schema

    Returns:
        Tuple of (is_valid, error_messages)
    """
    errors = []
    if not content or not content.strip():
        errors.append(f"{file_name} is empty")
        return False, errors
    try:
        parser = etree.XMLParser(resolve_entities=False, no_network=True)
        root = etree.fromstring(content, parser)
    except etree.XMLSyntaxError as e:
        errors.append(f"{file_name} is not well-formed XML: {e}")
        return False, errors

    if root.tag != f"{{{XSD_NAMESPACE}}}schema":
        errors.append(f"{file_name} root element is not xs:schema")
    return len(errors) == 0, errors


def validate_uploaded_schemas(schema1: bytes, schema2: bytes) -> Tuple[bool, List[str]]:
    """
    Validate both uploaded schema files

    Returns:
        Tuple of (both_valid, all_error_messages)
    """
    all_errors = []
    first_valid, first_errors = validate_schema_text(schema1, "schema1")
    all_errors.extend(first_errors)
    second_valid, second_errors = validate_schema_text(schema2, "schema2")
    all_errors.extend(second_errors)
    return first_valid and second_valid, all_errors


def validate_property_document(document: Any, file_name: str) -> Tuple[bool, List[str]]:
    """
    Validate a gold-standard or match-output document

    Expected layout: {"synonymies": [{"left": str, "right": str, ...}], "homonymies": [...]};
    extra keys (severity, phi, dictionaries) are tolerated.

    Returns:
        Tuple of (is_valid, error_messages)
    """
    errors = []
    if not isinstance(document, dict):
        errors.append(f"{file_name} must be a JSON object")
        return False, errors

    present = [kind for kind in PROPERTY_KINDS if kind in document]
    if not present:
        errors.append(f"{file_name} has neither 'synonymies' nor 'homonymies'")
        return False, errors

    for kind in present:
        rows = document[kind]
        if not isinstance(rows, list):
            errors.append(f"{file_name} '{kind}' must be a list")
            continue
        for index, row in enumerate(rows):
            if not isinstance(row, dict):
                errors.append(f"{file_name} {kind}[{index}] must be an object")
                continue
            for side in ("left", "right"):
                value = row.get(side)
                if not isinstance(value, str) or not value.strip():
                    errors.append(f"{file_name} {kind}[{index}] needs a non-empty '{side}' name")

    return len(errors) == 0, errors
