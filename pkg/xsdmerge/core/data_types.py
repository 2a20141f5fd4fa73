"""
Data-type compatibility for attributes and simple elements.

Each built-in type points to the next more general type it widens to, the way integral types
widen in programming languages. Two types are compatible when they share a more general type
(or are equal); the merged type is the least such common type. ID, IDREF, IDREFS and boolean
only match themselves; dates never mix with numerics.
"""

from xsdmerge.core.errors import IncompatibleTypes

MORE_GENERAL = {
    # integral chain
    "byte": "short",
    "short": "int",
    "int": "long",
    "long": "integer",
    "integer": "decimal",
    "unsignedByte": "unsignedShort",
    "unsignedShort": "unsignedInt",
    "unsignedInt": "unsignedLong",
    "unsignedLong": "nonNegativeInteger",
    "positiveInteger": "nonNegativeInteger",
    "nonNegativeInteger": "integer",
    "negativeInteger": "nonPositiveInteger",
    "nonPositiveInteger": "integer",
    # floating point
    "float": "double",
    # temporal
    "date": "dateTime",
    # string kind
    "NCName": "Name",
    "Name": "token",
    "NMTOKEN": "token",
    "language": "token",
    "token": "normalizedString",
    "normalizedString": "string",
    "anyURI": "string",
}


def generalizations(data_type: str) -> list[str]:
    """``data_type`` followed by every more general type, most specific first."""
    chain = [data_type]
    while chain[-1] in MORE_GENERAL:
        chain.append(MORE_GENERAL[chain[-1]])
    return chain


def compatible(t1: str, t2: str) -> bool:
    return bool(set(generalizations(t1)) & set(generalizations(t2)))


def merge_type(t1: str, t2: str) -> str:
    """Most general of two compatible types (their least common generalization)."""
    wider = set(generalizations(t2))
    for candidate in generalizations(t1):
        if candidate in wider:
            return candidate
    raise IncompatibleTypes(t1, t2)
