"""
Referenced-style XML Schema model.

Parses the subset of XSD used by referenced-style schemas (top-level attribute and element
declarations, complex types made of one xs:sequence / xs:all of element refs plus attribute refs)
into an explicit x-component model, and serializes models back to schema text.
"""

import logging
from enum import Enum
from typing import Iterable, Literal, Optional, Union

from lxml import etree
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from xsdmerge.core.errors import (
    AmbiguousRoot,
    DanglingReference,
    ParseError,
    SerializeError,
    UnknownComponent,
    UnsupportedStyle,
)

logger = logging.getLogger(__name__)

XSD_NAMESPACE = "http://www.w3.org/2001/XMLSchema"
XS = f"{{{XSD_NAMESPACE}}}"

UNBOUNDED = "unbounded"

# Built-in simple types accepted as data types of attributes and simple elements
BUILTIN_TYPES = frozenset({
    "string", "normalizedString", "token", "language", "Name", "NCName", "NMTOKEN", "NMTOKENS",
    "ID", "IDREF", "IDREFS", "ENTITY", "ENTITIES", "anyURI", "QName",
    "boolean", "byte", "short", "int", "long", "integer", "decimal", "float", "double",
    "nonNegativeInteger", "positiveInteger", "nonPositiveInteger", "negativeInteger",
    "unsignedByte", "unsignedShort", "unsignedInt", "unsignedLong",
    "date", "dateTime", "time", "duration", "gYear", "gYearMonth", "gMonth", "gMonthDay", "gDay",
    "base64Binary", "hexBinary",
})

ID_REF_TYPES = frozenset({"IDREF", "IDREFS"})


class Typology(str, Enum):
    COMPLEX_ELEMENT = "ComplexElement"
    SIMPLE_ELEMENT = "SimpleElement"
    ATTRIBUTE = "Attribute"

    @property
    def is_element(self) -> bool:
        return self is not Typology.ATTRIBUTE


class Compositor(str, Enum):
    SEQUENCE = "sequence"
    ALL = "all"


MaxOccurs = Union[int, Literal["unbounded"]]


def occurs_rank(value: MaxOccurs) -> float:
    """Numeric rank of an occurrence bound, with unbounded above every integer."""
    return float("inf") if value == UNBOUNDED else float(value)


def max_of_occurs(a: MaxOccurs, b: MaxOccurs) -> MaxOccurs:
    return a if occurs_rank(a) >= occurs_rank(b) else b


class XComponent(BaseModel):
    """An element or attribute declaration: name, typology and (for non-complex) data type."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    typology: Typology
    data_type: Optional[str] = None
    schema_id: str

    @model_validator(mode="after")
    def _check_data_type(self) -> "XComponent":
        if self.typology is Typology.COMPLEX_ELEMENT and self.data_type is not None:
            raise ValueError(f"complex element '{self.name}' cannot carry a data type")
        if self.typology is not Typology.COMPLEX_ELEMENT and not self.data_type:
            raise ValueError(f"{self.typology.value} '{self.name}' needs a data type")
        return self

    @property
    def key(self) -> str:
        """Case-insensitive matching key."""
        return self.name.lower()

    @property
    def is_complex(self) -> bool:
        return self.typology is Typology.COMPLEX_ELEMENT

    def __str__(self) -> str:
        return f"{self.name} [{self.typology.value}]"


class ChildRef(BaseModel):
    """Reference from a complex element's content model to an element declaration."""

    model_config = ConfigDict(frozen=True)

    target: str
    min_occurs: int = Field(default=1, ge=0)
    max_occurs: MaxOccurs = 1

    @model_validator(mode="after")
    def _check_bounds(self) -> "ChildRef":
        if self.max_occurs != UNBOUNDED and self.max_occurs < 1:
            raise ValueError(f"maxOccurs of ref '{self.target}' must be positive")
        if occurs_rank(self.min_occurs) > occurs_rank(self.max_occurs):
            raise ValueError(f"minOccurs > maxOccurs on ref '{self.target}'")
        return self


class AttributeUse(BaseModel):
    model_config = ConfigDict(frozen=True)

    ref: str
    required: bool = False


class SchemaModel(BaseModel):
    """Parsed referenced-style schema; immutable after construction."""

    model_config = ConfigDict(frozen=True)

    schema_id: str
    components: tuple[XComponent, ...]
    attribute_uses: dict[str, tuple[AttributeUse, ...]] = Field(default_factory=dict)
    child_refs: dict[str, tuple[ChildRef, ...]] = Field(default_factory=dict)
    compositors: dict[str, Compositor] = Field(default_factory=dict)

    _elements: dict[str, XComponent] = PrivateAttr(default_factory=dict)
    _attributes: dict[str, XComponent] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        for component in self.components:
            index = self._elements if component.typology.is_element else self._attributes
            index.setdefault(component.name, component)

    # Lookup

    def element(self, name: str) -> Optional[XComponent]:
        return self._elements.get(name)

    def attribute(self, name: str) -> Optional[XComponent]:
        return self._attributes.get(name)

    def lookup(self, name: str, typology: Typology) -> Optional[XComponent]:
        found = self.attribute(name) if typology is Typology.ATTRIBUTE else self.element(name)
        if found is not None and found.typology is typology:
            return found
        return None

    def find(self, name: str, typology: Optional[Typology] = None) -> XComponent:
        """Component by name, elements first unless ``typology`` says otherwise."""
        if typology is not None:
            found = self.lookup(name, Typology(typology))
        else:
            found = self.element(name) or self.attribute(name)
        if found is None:
            raise UnknownComponent(name, self.schema_id)
        return found

    def contains(self, component: XComponent) -> bool:
        return (component.schema_id == self.schema_id
                and self.lookup(component.name, component.typology) == component)

    def complex_elements(self) -> list[XComponent]:
        return [c for c in self.components if c.is_complex]

    def children(self, element: XComponent) -> tuple[ChildRef, ...]:
        return self.child_refs.get(element.name, ())

    def attributes_of(self, element: XComponent) -> tuple[AttributeUse, ...]:
        return self.attribute_uses.get(element.name, ())

    def compositor_of(self, element: XComponent) -> Compositor:
        return self.compositors.get(element.name, Compositor.SEQUENCE)

    def referenced_names(self) -> set[str]:
        return {ref.target for refs in self.child_refs.values() for ref in refs}

    # Invariants

    def invariant_violations(self) -> list[str]:
        """Every reference resolves with matching typology; names unique per namespace."""
        problems = []
        seen_elements: set[str] = set()
        seen_attributes: set[str] = set()
        for component in self.components:
            if component.schema_id != self.schema_id:
                problems.append(f"{component} belongs to schema '{component.schema_id}'")
            seen = seen_elements if component.typology.is_element else seen_attributes
            if component.name in seen:
                problems.append(f"duplicate declaration of {component}")
            seen.add(component.name)

        for owner, refs in self.child_refs.items():
            if self.lookup(owner, Typology.COMPLEX_ELEMENT) is None:
                problems.append(f"child refs attached to undeclared complex element '{owner}'")
            for ref in refs:
                if self.element(ref.target) is None:
                    problems.append(f"{owner} references undeclared element '{ref.target}'")
        for owner, uses in self.attribute_uses.items():
            if self.lookup(owner, Typology.COMPLEX_ELEMENT) is None:
                problems.append(f"attribute uses attached to undeclared complex element '{owner}'")
            for use in uses:
                if self.attribute(use.ref) is None:
                    problems.append(f"{owner} references undeclared attribute '{use.ref}'")
        return problems

    # Structural comparison

    def structure(self) -> tuple:
        """Canonical form ignoring declaration order and schema id."""
        declarations = tuple(sorted(
            (c.name, c.typology.value, c.data_type or "") for c in self.components
        ))
        contents = []
        for element in sorted(self.complex_elements(), key=lambda c: c.name):
            refs = self.children(element)
            compositor = self.compositor_of(element).value if refs else None
            contents.append((
                element.name,
                compositor,
                tuple((r.target, r.min_occurs, str(r.max_occurs)) for r in refs),
                tuple(sorted((a.ref, a.required) for a in self.attributes_of(element))),
            ))
        return declarations, tuple(contents)

    def structurally_equal(self, other: "SchemaModel") -> bool:
        return self.structure() == other.structure()


# Operations

def xcomponents(model: SchemaModel) -> frozenset[XComponent]:
    return frozenset(model.components)


def root_element(model: SchemaModel) -> XComponent:
    """The unique complex element that no child ref points at."""
    referenced = model.referenced_names()
    candidates = [c for c in model.complex_elements() if c.name not in referenced]
    if len(candidates) != 1:
        raise AmbiguousRoot([c.name for c in candidates])
    return candidates[0]


def _local(node: etree._Element) -> str:
    return etree.QName(node).localname


def _is_xs(node: etree._Element, local: str) -> bool:
    return node.tag == f"{XS}{local}"


def _element_children(node: etree._Element) -> list[etree._Element]:
    """Child elements minus comments, processing instructions and xs:annotation."""
    return [
        child for child in node
        if isinstance(child.tag, str) and not _is_xs(child, "annotation")
    ]


def _builtin_type(node: etree._Element, name: str) -> str:
    value = node.get("type")
    if value is None:
        raise ParseError(f"'{name}' declares no type")
    prefix, _, local = value.rpartition(":")
    namespace = node.nsmap.get(prefix or None)
    if namespace != XSD_NAMESPACE or local not in BUILTIN_TYPES:
        raise UnsupportedStyle(f"'{name}' uses type '{value}'; only built-in xs types are supported")
    return local


def _occurs(node: etree._Element, attribute: str, owner: str) -> MaxOccurs:
    raw = node.get(attribute)
    if raw is None:
        return 1
    raw = raw.strip()
    if raw == UNBOUNDED and attribute == "maxOccurs":
        return UNBOUNDED
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{owner}: invalid {attribute}='{raw}'")
    if value < 0:
        raise ParseError(f"{owner}: negative {attribute}='{raw}'")
    return value


def _parse_complex_type(
    complex_type: etree._Element, owner: str
) -> tuple[Compositor, list[ChildRef], list[AttributeUse]]:
    compositor = Compositor.SEQUENCE
    refs: list[ChildRef] = []
    uses: list[AttributeUse] = []
    group_seen = False

    for child in _element_children(complex_type):
        if _is_xs(child, "sequence") or _is_xs(child, "all"):
            if group_seen or uses:
                raise UnsupportedStyle(f"{owner}: only one model group, placed before attributes")
            group_seen = True
            compositor = Compositor(_local(child))
            for particle in _element_children(child):
                if not _is_xs(particle, "element"):
                    raise UnsupportedStyle(f"{owner}: <xs:{_local(particle)}> inside model group")
                if particle.get("ref") is None:
                    raise UnsupportedStyle(
                        f"{owner}: inline declaration of '{particle.get('name')}', use ref"
                    )
                if _element_children(particle):
                    raise UnsupportedStyle(f"{owner}: element ref '{particle.get('ref')}' has content")
                target = particle.get("ref")
                min_occurs = _occurs(particle, "minOccurs", owner)
                max_occurs = _occurs(particle, "maxOccurs", owner)
                if max_occurs != UNBOUNDED and (max_occurs < 1 or min_occurs > max_occurs):
                    raise ParseError(f"{owner}: invalid occurrence bounds on ref '{target}'")
                refs.append(ChildRef(target=target, min_occurs=min_occurs, max_occurs=max_occurs))
        elif _is_xs(child, "attribute"):
            if child.get("ref") is None:
                raise UnsupportedStyle(f"{owner}: inline attribute '{child.get('name')}', use ref")
            use = child.get("use", "optional")
            if use not in ("optional", "required"):
                raise UnsupportedStyle(f"{owner}: attribute use '{use}' is not supported")
            uses.append(AttributeUse(ref=child.get("ref"), required=use == "required"))
        else:
            raise UnsupportedStyle(f"{owner}: <xs:{_local(child)}> is not supported in complexType")
    return compositor, refs, uses


def parse_schema(schema_text: Union[str, bytes], schema_id: str) -> SchemaModel:
    """Parse referenced-style schema text into a SchemaModel, keeping document order."""
    data = schema_text.encode("utf-8") if isinstance(schema_text, str) else schema_text
    parser = etree.XMLParser(resolve_entities=False, no_network=True, remove_comments=True)
    try:
        document = etree.fromstring(data, parser)
    except etree.XMLSyntaxError as e:
        raise ParseError(f"Malformed schema XML: {e}") from e

    if not _is_xs(document, "schema"):
        raise ParseError(f"Root element is <{document.tag}>, expected xs:schema")

    components: list[XComponent] = []
    child_refs: dict[str, tuple[ChildRef, ...]] = {}
    attribute_uses: dict[str, tuple[AttributeUse, ...]] = {}
    compositors: dict[str, Compositor] = {}

    for node in _element_children(document):
        name = node.get("name")
        if _is_xs(node, "attribute"):
            if not name:
                raise ParseError("Top-level attribute without a name")
            if _element_children(node):
                raise UnsupportedStyle(f"attribute '{name}': anonymous simple types are not supported")
            components.append(XComponent(
                name=name, typology=Typology.ATTRIBUTE,
                data_type=_builtin_type(node, name), schema_id=schema_id,
            ))
        elif _is_xs(node, "element"):
            if not name:
                raise ParseError("Top-level element without a name")
            content = _element_children(node)
            if node.get("type") is not None:
                if content:
                    raise UnsupportedStyle(f"element '{name}' has both a type and inline content")
                components.append(XComponent(
                    name=name, typology=Typology.SIMPLE_ELEMENT,
                    data_type=_builtin_type(node, name), schema_id=schema_id,
                ))
                continue
            if len(content) > 1 or (content and not _is_xs(content[0], "complexType")):
                raise UnsupportedStyle(f"element '{name}': only one anonymous xs:complexType allowed")
            components.append(XComponent(
                name=name, typology=Typology.COMPLEX_ELEMENT, schema_id=schema_id,
            ))
            if content:
                compositor, refs, uses = _parse_complex_type(content[0], name)
                if refs:
                    child_refs[name] = tuple(refs)
                    compositors[name] = compositor
                if uses:
                    attribute_uses[name] = tuple(uses)
        else:
            raise UnsupportedStyle(f"top-level <xs:{_local(node)}> is not supported")

    model = SchemaModel(
        schema_id=schema_id,
        components=tuple(components),
        attribute_uses=attribute_uses,
        child_refs=child_refs,
        compositors=compositors,
    )
    _check_references(model)
    logger.debug(f"Parsed schema '{schema_id}' with {len(components)} components")
    return model


def _check_references(model: SchemaModel) -> None:
    seen: set[tuple[bool, str]] = set()
    for component in model.components:
        key = (component.typology.is_element, component.name)
        if key in seen:
            raise ParseError(f"Duplicate declaration of {component}")
        seen.add(key)
    for owner, refs in model.child_refs.items():
        for ref in refs:
            if model.element(ref.target) is None:
                raise DanglingReference(ref.target, "element", owner)
    for owner, uses in model.attribute_uses.items():
        for use in uses:
            if model.attribute(use.ref) is None:
                raise DanglingReference(use.ref, "attribute", owner)


def _ordered_for_output(model: SchemaModel, root: XComponent) -> Iterable[tuple[str, list[XComponent]]]:
    attributes = [c for c in model.components if c.typology is Typology.ATTRIBUTE]
    simple = [c for c in model.components if c.typology is Typology.SIMPLE_ELEMENT]
    complex_ = [c for c in model.components if c.is_complex and c != root]
    yield " Definition of attributes ", attributes
    yield " Definition of simple elements ", simple
    yield " Definition of complex elements ", complex_
    yield " Definition of root element ", [root]


def _complex_declaration(model: SchemaModel, element: XComponent) -> etree._Element:
    declaration = etree.Element(f"{XS}element", name=element.name)
    complex_type = etree.SubElement(declaration, f"{XS}complexType")
    refs = model.children(element)
    if refs:
        group = etree.SubElement(complex_type, f"{XS}{model.compositor_of(element).value}")
        for ref in refs:
            particle = etree.SubElement(group, f"{XS}element", ref=ref.target)
            if ref.min_occurs != 1:
                particle.set("minOccurs", str(ref.min_occurs))
            if ref.max_occurs != 1:
                particle.set("maxOccurs", str(ref.max_occurs))
    for use in model.attributes_of(element):
        attribute = etree.SubElement(complex_type, f"{XS}attribute", ref=use.ref)
        if use.required:
            attribute.set("use", "required")
    return declaration


def serialize_schema(model: SchemaModel) -> str:
    """Referenced-style schema text: attributes, simple elements, complex elements, root last."""
    problems = model.invariant_violations()
    if problems:
        raise SerializeError("; ".join(problems))
    try:
        root = root_element(model)
    except AmbiguousRoot as e:
        raise SerializeError(str(e)) from e

    document = etree.Element(f"{XS}schema", nsmap={"xs": XSD_NAMESPACE})
    for comment, group in _ordered_for_output(model, root):
        if not group:
            continue
        document.append(etree.Comment(comment))
        for component in group:
            if component.is_complex:
                document.append(_complex_declaration(model, component))
            else:
                tag = "attribute" if component.typology is Typology.ATTRIBUTE else "element"
                etree.SubElement(document, f"{XS}{tag}", name=component.name,
                                 type=f"xs:{component.data_type}")

    return etree.tostring(
        document, pretty_print=True, xml_declaration=True, encoding="UTF-8"
    ).decode("utf-8")
