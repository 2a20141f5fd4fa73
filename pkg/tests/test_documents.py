import json
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator

from xsdmerge.core.pipeline import run_integration, run_match
from xsdmerge.services.evaluation import evaluate, load_property_file


DOCS = Path(__file__).resolve().parent.parent / "docs"


def validator(name):
    schema = json.loads((DOCS / name).read_text(encoding="utf-8"))
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


class TestDocumentSchemas:
    """Emitted JSON documents follow the published schemas in docs/"""

    @pytest.mark.parametrize("u", [0, 1, 2])
    def test_match_output(self, inputs, u):
        document = run_match(inputs, u, with_dictionaries=True).to_document()
        validator("match.schema.json").validate(document)

    def test_audit(self, inputs):
        document = run_integration(inputs, 0).integration.audit_document()
        validator("audit.schema.json").validate(document)

    def test_gold_fixture(self, fixtures_dir):
        validator("gold.schema.json").validate(json.loads((fixtures_dir / "gold.json").read_text(encoding="utf-8")))

    def test_eval_response(self, client, fixtures_dir):
        gold = (fixtures_dir / "gold.json").read_bytes()
        response = client.post(
            "/eval",
            files={
                "properties": ("properties.json", gold, "application/json"),
                "gold": ("gold.json", gold, "application/json"),
            },
        )
        validator("eval.schema.json").validate(response.json())

    def test_report_without_display_fields(self, fixtures_dir):
        gold = load_property_file(fixtures_dir / "gold.json")
        validator("eval.schema.json").validate(evaluate(gold, gold).model_dump())
