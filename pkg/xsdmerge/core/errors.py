"""
Exception hierarchy for schema matching and integration.

Every error raised by the core modules derives from XsdMergeError so that the CLI and the
HTTP layer can map domain failures to exit codes / status codes in one place.
"""

from typing import Optional


class XsdMergeError(Exception):
    """Base class for all domain errors."""


# Schema model

class ParseError(XsdMergeError):
    """Schema text is not well-formed XML or violates the model invariants."""


class UnsupportedStyle(ParseError):
    """Schema uses a construct outside the supported referenced-style subset."""


class DanglingReference(ParseError):
    """A ref attribute names no declared component of matching typology."""

    def __init__(self, target: str, kind: str, owner: str):
        self.target = target
        self.kind = kind
        self.owner = owner
        super().__init__(f"{owner} references undeclared {kind} '{target}'")


class SerializeError(XsdMergeError):
    """Model cannot be serialized because one of its invariants is violated."""


class AmbiguousRoot(XsdMergeError):
    """Zero or more than one complex element is unreferenced."""

    def __init__(self, candidates: list[str]):
        self.candidates = candidates
        if candidates:
            detail = f"{len(candidates)} unreferenced complex elements: {', '.join(candidates)}"
        else:
            detail = "no unreferenced complex element"
        super().__init__(f"Cannot determine root element ({detail})")


# Instance documents

class InstanceParseError(XsdMergeError):
    """One or more instance documents could not be parsed.

    Raised after every document has been scanned; ``partial`` holds the map built from the
    documents that did parse.
    """

    def __init__(self, failed: dict[int, str], partial=None):
        self.failed = failed
        self.partial = partial
        listing = "; ".join(f"document {i}: {msg}" for i, msg in sorted(failed.items()))
        super().__init__(f"Malformed instance XML ({listing})")


# Graph and matching

class UnknownComponent(XsdMergeError):
    """Component does not belong to the model or graph it is used with."""

    def __init__(self, name: str, schema_id: Optional[str] = None):
        self.name = name
        self.schema_id = schema_id
        where = f" in schema '{schema_id}'" if schema_id else ""
        super().__init__(f"Unknown component '{name}'{where}")


class EmptyNeighborhood(XsdMergeError):
    """phi was asked to compare an empty component set."""


class SeverityOutOfRange(XsdMergeError):
    """Severity level is negative or above the maximum severity of the schema pair."""

    def __init__(self, severity: int, maximum: int):
        self.severity = severity
        self.maximum = maximum
        super().__init__(f"Severity {severity} out of range: valid levels are 0..{maximum}")


# Thesaurus

class ThesaurusIOError(XsdMergeError):
    """Thesaurus file cannot be read."""


class FormatError(XsdMergeError):
    """Thesaurus line is not a single tab-separated pair."""

    def __init__(self, line_number: int, line: str):
        self.line_number = line_number
        self.line = line
        super().__init__(f"Line {line_number}: expected 'term_a<TAB>term_b', got {line!r}")


# Integration

class IncompatibleTypes(XsdMergeError):
    """Two data types have no common most-general type."""

    def __init__(self, left: str, right: str):
        self.left = left
        self.right = right
        super().__init__(f"Data types '{left}' and '{right}' are not compatible")


class NotMerged(XsdMergeError):
    """Complex element pair is not recorded in the Merge Dictionary."""


class InconsistentDictionary(XsdMergeError):
    """Merge or Rename Dictionary references components the schemas do not declare."""


# Evaluation

class GoldFormatError(XsdMergeError):
    """Gold standard or property file does not have the expected JSON layout."""


class EmptyGoldStandard(XsdMergeError):
    """Gold standard contains no property, so completeness is undefined."""
