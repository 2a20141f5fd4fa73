"""
Evaluation of extracted properties against a human-provided gold standard.

correctness  = |returned ∩ gold| / |returned|
completeness = |returned ∩ gold| / |gold|

A property is identified by its kind (synonymy / homonymy) and the unordered pair of names.
"""

import json
import logging
import time
from pathlib import Path
from typing import Optional, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict

from xsdmerge.core.errors import EmptyGoldStandard, GoldFormatError
from xsdmerge.core.interscheme import check_severity, extract_properties, max_severity
from xsdmerge.core.pipeline import MatchInputs
from xsdmerge.utils.data_validation import validate_property_document

logger = logging.getLogger(__name__)

KINDS = ("synonymy", "homonymy")
PROPERTY_COLUMNS = ["kind", "first", "second"]


class GoldStandard(BaseModel):
    """Expected synonymies and homonymies as name pairs."""

    model_config = ConfigDict(frozen=True)

    synonymies: frozenset[tuple[str, str]] = frozenset()
    homonymies: frozenset[tuple[str, str]] = frozenset()

    @classmethod
    def from_document(cls, document, source: str = "gold") -> "GoldStandard":
        is_valid, errors = validate_property_document(document, source)
        if not is_valid:
            raise GoldFormatError("; ".join(errors))
        return cls(
            synonymies=frozenset((row["left"], row["right"]) for row in document.get("synonymies", [])),
            homonymies=frozenset((row["left"], row["right"]) for row in document.get("homonymies", [])),
        )

    def __len__(self) -> int:
        return len(property_frame(self))


def load_property_file(path: Union[str, Path]) -> GoldStandard:
    """Read a gold or match-output JSON file; phi profiles and dictionaries are ignored."""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise GoldFormatError(f"{path}: not valid JSON ({e})") from e
    return GoldStandard.from_document(document, source=str(path))


def property_frame(properties: GoldStandard) -> pd.DataFrame:
    """One row per property with the name pair in canonical (sorted) order, duplicates dropped."""
    rows = []
    for kind, pairs in (("synonymy", properties.synonymies), ("homonymy", properties.homonymies)):
        for a, b in pairs:
            first, second = sorted((a, b))
            rows.append({"kind": kind, "first": first, "second": second})
    return pd.DataFrame(rows, columns=PROPERTY_COLUMNS).drop_duplicates().reset_index(drop=True)


class EvalReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    returned: int
    gold: int
    overlap: int
    correctness: float
    completeness: float

    def format(self) -> str:
        return f"correctness={self.correctness:.2f} completeness={self.completeness:.2f}"


def evaluate(returned: GoldStandard, gold: GoldStandard) -> EvalReport:
    gold_df = property_frame(gold)
    if gold_df.empty:
        raise EmptyGoldStandard("Gold standard lists no property; completeness is undefined")
    returned_df = property_frame(returned)
    overlap = len(returned_df.merge(gold_df, on=PROPERTY_COLUMNS, how="inner"))

    if returned_df.empty:
        logger.warning("No property was returned; reporting correctness as 1.00")
        correctness = 1.0
    else:
        correctness = overlap / len(returned_df)
    completeness = overlap / len(gold_df)
    return EvalReport(
        returned=len(returned_df),
        gold=len(gold_df),
        overlap=overlap,
        correctness=correctness,
        completeness=completeness,
    )


def severity_sweep(inputs: MatchInputs, gold: GoldStandard, max_level: Optional[int] = None) -> pd.DataFrame:
    """Correctness, completeness and extraction time for every severity 0..max_level.

    ``time_increase`` is the percentage change of extraction time with respect to the previous
    level (NaN for level 0).
    """
    bound = max_severity(inputs.s1, inputs.s2)
    top = bound if max_level is None else max_level
    check_severity(top, inputs.s1, inputs.s2)

    # Connection costs are memoized per graph; compute them once so level 0 is not charged for it
    for graph in (inputs.g1, inputs.g2):
        for component in graph.model.components:
            graph.cost_row(component)

    rows = []
    for level in range(top + 1):
        started = time.perf_counter()
        properties = extract_properties(
            inputs.s1, inputs.s2, level, inputs.g1, inputs.g2, inputs.thesaurus,
            max_workers=inputs.max_workers,
        )
        seconds = time.perf_counter() - started
        returned = GoldStandard(
            synonymies=frozenset((s.left.name, s.right.name) for s in properties.synonymies),
            homonymies=frozenset((h.left.name, h.right.name) for h in properties.homonymies),
        )
        report = evaluate(returned, gold)
        rows.append({
            "level": level,
            "correctness": report.correctness,
            "completeness": report.completeness,
            "returned": report.returned,
            "seconds": seconds,
        })
        logger.info(f"Sweep level {level}: {report.format()} ({report.returned} properties)")

    frame = pd.DataFrame(rows)
    frame["time_increase"] = frame["seconds"].pct_change() * 100
    return frame


def format_sweep(frame: pd.DataFrame) -> list[str]:
    lines = []
    for row in frame.itertuples(index=False):
        increase = "-" if pd.isna(row.time_increase) else f"{row.time_increase:.1f}%"
        lines.append(
            f"level={row.level} correctness={row.correctness:.2f} "
            f"completeness={row.completeness:.2f} time_increase={increase}"
        )
    return lines
