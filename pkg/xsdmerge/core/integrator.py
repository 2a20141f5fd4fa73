"""
Integration of two schemas into a global schema S_G.

The rough S_G concatenates the declarations of S1 and S2. Refinement then merges every Merge
Dictionary pair (S1 names win), rewrites references to merged components, lets a simple element
absorb an attribute it was paired with, renames the S2 side of every Rename Dictionary pair and,
when the two roots were not merged, hangs both roots under a fresh root with the all indicator.
"""

import logging
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from xsdmerge.core.data_types import merge_type
from xsdmerge.core.dictionaries import MergeDictionary, RenameDictionary
from xsdmerge.core.errors import InconsistentDictionary, NotMerged
from xsdmerge.core.schema_model import (
    AttributeUse,
    ChildRef,
    Compositor,
    MaxOccurs,
    SchemaModel,
    Typology,
    XComponent,
    max_of_occurs,
    root_element,
)

logger = logging.getLogger(__name__)

GLOBAL_SCHEMA_ID = "S_G"
LEFT_SIDE = 0
RIGHT_SIDE = 1

AuditAction = Literal["kept", "merged", "renamed", "absorbed"]

# Output name, typology and data type of a component in S_G
Placement = tuple[str, Typology, Optional[str]]


class PlannedMerge(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: XComponent
    right: XComponent
    name: str
    data_type: Optional[str] = None


class PlannedAbsorb(BaseModel):
    """A simple element taking over the information content of an attribute."""

    model_config = ConfigDict(frozen=True)

    element: XComponent
    attribute: XComponent
    element_side: int = Field(ge=0, le=1)
    name: str
    data_type: str


class PlannedRename(BaseModel):
    model_config = ConfigDict(frozen=True)

    component: XComponent
    name: str


class MergePlan(BaseModel):
    """Every naming decision of one integration, derived from MD and RD."""

    model_config = ConfigDict(frozen=True)

    element_merges: tuple[PlannedMerge, ...] = ()
    simple_merges: tuple[PlannedMerge, ...] = ()
    attribute_merges: tuple[PlannedMerge, ...] = ()
    element_absorbs_attribute: tuple[PlannedAbsorb, ...] = ()
    renames: tuple[PlannedRename, ...] = ()

    _placements: dict[tuple[int, XComponent], Placement] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        for merge in (*self.element_merges, *self.simple_merges, *self.attribute_merges):
            placement = (merge.name, merge.left.typology, merge.data_type)
            self._placements[(LEFT_SIDE, merge.left)] = placement
            self._placements[(RIGHT_SIDE, merge.right)] = placement
        for absorb in self.element_absorbs_attribute:
            placement = (absorb.name, absorb.element.typology, absorb.data_type)
            self._placements[(absorb.element_side, absorb.element)] = placement
            self._placements[(1 - absorb.element_side, absorb.attribute)] = placement
        for rename in self.renames:
            c = rename.component
            self._placements[(RIGHT_SIDE, c)] = (rename.name, c.typology, c.data_type)

    def placement(self, side: int, component: XComponent) -> Placement:
        found = self._placements.get((side, component))
        if found is None:
            return component.name, component.typology, component.data_type
        return found

    def output_name(self, side: int, component: XComponent) -> str:
        return self.placement(side, component)[0]

    def is_merged(self, side: int, component: XComponent) -> bool:
        members = [(LEFT_SIDE, m.left) for m in (*self.element_merges, *self.simple_merges, *self.attribute_merges)]
        members += [(RIGHT_SIDE, m.right) for m in (*self.element_merges, *self.simple_merges, *self.attribute_merges)]
        members += [(a.element_side, a.element) for a in self.element_absorbs_attribute]
        return (side, component) in members

    def is_absorbed(self, side: int, component: XComponent) -> bool:
        return any(
            a.attribute == component and a.element_side != side for a in self.element_absorbs_attribute
        )

    def is_renamed(self, side: int, component: XComponent) -> bool:
        return side == RIGHT_SIDE and any(r.component == component for r in self.renames)


class MergedElement(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    compositor: Compositor = Compositor.SEQUENCE
    child_refs: tuple[ChildRef, ...] = ()
    attribute_uses: tuple[AttributeUse, ...] = ()


class AuditEntry(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    schema_id: str = Field(alias="schema")
    name: str
    typology: Typology
    target: str
    action: AuditAction


class Integration(BaseModel):
    """S_G together with the audit mapping and the plan that produced it."""

    model_config = ConfigDict(frozen=True)

    schema_model: SchemaModel
    audit: tuple[AuditEntry, ...]
    plan: MergePlan

    def audit_document(self) -> list[dict]:
        return [entry.model_dump(mode="json", by_alias=True) for entry in self.audit]


def _check_dictionaries(s1: SchemaModel, s2: SchemaModel, md: MergeDictionary, rd: RenameDictionary) -> None:
    lefts: set[XComponent] = set()
    rights: set[XComponent] = set()
    for entry in md.entries:
        if not s1.contains(entry.left):
            raise InconsistentDictionary(f"MD names {entry.left} which '{s1.schema_id}' does not declare")
        if not s2.contains(entry.right):
            raise InconsistentDictionary(f"MD names {entry.right} which '{s2.schema_id}' does not declare")
        if entry.left.is_complex != entry.right.is_complex:
            raise InconsistentDictionary(f"MD pairs {entry.left} with {entry.right}")
        if entry.left in lefts or entry.right in rights:
            raise InconsistentDictionary(f"MD is not one-to-one at ({entry.left.name}, {entry.right.name})")
        lefts.add(entry.left)
        rights.add(entry.right)
    for entry in rd.entries:
        if not s1.contains(entry.left) or not s2.contains(entry.right):
            raise InconsistentDictionary(f"RD pair ({entry.left.name}, {entry.right.name}) is not declared")
        if entry.left.key != entry.right.key:
            raise InconsistentDictionary(f"RD pairs differently named {entry.left} and {entry.right}")


def _fresh_name(base: str, taken: set[str], start: int) -> str:
    """``base`` itself when free, else the first free ``base_<k>`` for k >= start."""
    if base.lower() not in taken:
        return base
    k = start
    while f"{base}_{k}".lower() in taken:
        k += 1
    return f"{base}_{k}"


def plan_merge(
    s1: SchemaModel,
    s2: SchemaModel,
    md: MergeDictionary,
    rd: RenameDictionary,
    rename_suffix_start: int = 2,
) -> MergePlan:
    _check_dictionaries(s1, s2, md, rd)

    element_merges, simple_merges, attribute_merges, absorbs = [], [], [], []
    absorbed_left: set[XComponent] = set()
    s2_elements_by_absorb: list[tuple[XComponent, XComponent]] = []
    for entry in md.entries:
        x1, x2 = entry.left, entry.right
        if x1.is_complex:
            element_merges.append(PlannedMerge(left=x1, right=x2, name=x1.name))
        elif x1.typology is x2.typology:
            merges = attribute_merges if x1.typology is Typology.ATTRIBUTE else simple_merges
            merges.append(PlannedMerge(
                left=x1, right=x2, name=x1.name, data_type=merge_type(x1.data_type, x2.data_type),
            ))
        elif x1.typology is Typology.SIMPLE_ELEMENT:
            absorbs.append(PlannedAbsorb(
                element=x1, attribute=x2, element_side=LEFT_SIDE, name=x1.name,
                data_type=merge_type(x1.data_type, x2.data_type),
            ))
        else:
            absorbed_left.add(x1)
            s2_elements_by_absorb.append((x2, x1))

    # Names S1 contributes, per namespace, lowercased
    taken_elements = {c.key for c in s1.components if c.typology.is_element}
    taken_attributes = {
        c.key for c in s1.components if c.typology is Typology.ATTRIBUTE and c not in absorbed_left
    }

    renamed_right = {
        entry.right for entry in rd.entries if md.partner_of_right(entry.right) is None
    }
    for entry in rd.entries:
        if entry.right not in renamed_right:
            logger.debug(f"RD pair ({entry.left.name}, {entry.right.name}) needs no rename: S2 side is merged")

    # S2 components that keep their own names also reserve them
    for c in s2.components:
        if md.partner_of_right(c) is None and c not in renamed_right:
            (taken_elements if c.typology.is_element else taken_attributes).add(c.key)

    for element, attribute in s2_elements_by_absorb:
        name = _fresh_name(element.name, taken_elements, rename_suffix_start)
        taken_elements.add(name.lower())
        absorbs.append(PlannedAbsorb(
            element=element, attribute=attribute, element_side=RIGHT_SIDE, name=name,
            data_type=merge_type(element.data_type, attribute.data_type),
        ))

    renames = []
    for c in s2.components:
        if c not in renamed_right:
            continue
        taken = taken_elements if c.typology.is_element else taken_attributes
        name = _fresh_name(c.name, taken, rename_suffix_start)
        taken.add(name.lower())
        renames.append(PlannedRename(component=c, name=name))

    plan = MergePlan(
        element_merges=tuple(element_merges),
        simple_merges=tuple(simple_merges),
        attribute_merges=tuple(attribute_merges),
        element_absorbs_attribute=tuple(absorbs),
        renames=tuple(renames),
    )
    logger.debug(
        f"Merge plan: {len(element_merges)} complex, {len(simple_merges)} simple, "
        f"{len(attribute_merges)} attribute merges, {len(absorbs)} absorbs, {len(renames)} renames"
    )
    return plan


class _RefSlot:
    def __init__(self, target: str, min_occurs: int, max_occurs: MaxOccurs, side: int):
        self.target = target
        self.min_occurs = min_occurs
        self.max_occurs = max_occurs
        self.sides = {side}


class _UseSlot:
    def __init__(self, ref: str, required: bool, side: int):
        self.ref = ref
        self.required = required
        self.sides = {side}


def _add_ref(slots: list[_RefSlot], target: str, min_occurs: int, max_occurs: MaxOccurs, side: int) -> None:
    for slot in slots:
        if slot.target == target and side not in slot.sides:
            slot.min_occurs = min(slot.min_occurs, min_occurs)
            slot.max_occurs = max_of_occurs(slot.max_occurs, max_occurs)
            slot.sides.add(side)
            return
    slots.append(_RefSlot(target, min_occurs, max_occurs, side))


def _add_use(slots: list[_UseSlot], ref: str, required: bool, side: int) -> None:
    for slot in slots:
        if slot.ref == ref and side not in slot.sides:
            slot.required = slot.required and required
            slot.sides.add(side)
            return
    slots.append(_UseSlot(ref, required, side))


def _combine_content(
    name: str, sources: list[tuple[int, SchemaModel, XComponent]], plan: MergePlan
) -> MergedElement:
    """Content of an S_G complex element built from one or two source elements."""
    ref_slots: list[_RefSlot] = []
    use_slots: list[_UseSlot] = []
    compositors = []
    for side, model, element in sources:
        refs = model.children(element)
        if refs:
            compositors.append(model.compositor_of(element))
        for ref in refs:
            target = plan.output_name(side, model.element(ref.target))
            _add_ref(ref_slots, target, ref.min_occurs, ref.max_occurs, side)
        for use in model.attributes_of(element):
            out_name, typology, _ = plan.placement(side, model.attribute(use.ref))
            if typology is Typology.ATTRIBUTE:
                _add_use(use_slots, out_name, use.required, side)
            else:
                _add_ref(ref_slots, out_name, 1 if use.required else 0, 1, side)

    if len(sources) > 1:
        for slot in ref_slots:
            if len(slot.sides) == 1:
                slot.min_occurs = 0
        for slot in use_slots:
            if len(slot.sides) == 1:
                slot.required = False

    compositor = Compositor.SEQUENCE
    if compositors and all(c is Compositor.ALL for c in compositors):
        compositor = Compositor.ALL
    return MergedElement(
        name=name,
        compositor=compositor,
        child_refs=tuple(
            ChildRef(target=s.target, min_occurs=s.min_occurs, max_occurs=s.max_occurs) for s in ref_slots
        ),
        attribute_uses=tuple(AttributeUse(ref=s.ref, required=s.required) for s in use_slots),
    )


def merge_complex(
    s1: SchemaModel,
    s2: SchemaModel,
    e1: XComponent,
    e2: XComponent,
    md: MergeDictionary,
    plan: Optional[MergePlan] = None,
) -> MergedElement:
    """Merged content of an MD complex pair: E1's refs, then E2's refs not collapsed into them."""
    if not e1.is_complex or not md.contains(e1, e2):
        raise NotMerged(f"({e1.name}, {e2.name}) is not a merged complex pair")
    if plan is None:
        plan = plan_merge(s1, s2, md, RenameDictionary(severity=md.severity))
    return _combine_content(
        plan.output_name(LEFT_SIDE, e1), [(LEFT_SIDE, s1, e1), (RIGHT_SIDE, s2, e2)], plan
    )


def _audit(plan: MergePlan, sides: list[tuple[int, SchemaModel]]) -> list[AuditEntry]:
    entries = []
    for side, model in sides:
        for c in model.components:
            if plan.is_absorbed(side, c):
                action = "absorbed"
            elif plan.is_merged(side, c):
                action = "merged"
            elif plan.is_renamed(side, c):
                action = "renamed"
            else:
                action = "kept"
            entries.append(AuditEntry(
                schema_id=model.schema_id, name=c.name, typology=c.typology,
                target=plan.output_name(side, c), action=action,
            ))
    return entries


def integrate_with_audit(
    s1: SchemaModel,
    s2: SchemaModel,
    md: MergeDictionary,
    rd: RenameDictionary,
    root_name: str = "root",
    rename_suffix_start: int = 2,
) -> Integration:
    plan = plan_merge(s1, s2, md, rd, rename_suffix_start=rename_suffix_start)
    sides = [(LEFT_SIDE, s1), (RIGHT_SIDE, s2)]

    declarations: dict[tuple[bool, str], XComponent] = {}
    for side, model in sides:
        for c in model.components:
            name, typology, data_type = plan.placement(side, c)
            key = (typology.is_element, name)
            if key not in declarations:
                declarations[key] = XComponent(
                    name=name, typology=typology, data_type=data_type, schema_id=GLOBAL_SCHEMA_ID,
                )

    partners = {m.left: m.right for m in plan.element_merges}
    merged_right = set(partners.values())
    contents: list[MergedElement] = []
    for e1 in s1.complex_elements():
        if e1 in partners:
            contents.append(merge_complex(s1, s2, e1, partners[e1], md, plan))
        else:
            contents.append(_combine_content(e1.name, [(LEFT_SIDE, s1, e1)], plan))
    for e2 in s2.complex_elements():
        if e2 not in merged_right:
            contents.append(_combine_content(plan.output_name(RIGHT_SIDE, e2), [(RIGHT_SIDE, s2, e2)], plan))

    r1, r2 = root_element(s1), root_element(s2)
    if partners.get(r1) != r2:
        taken = {name.lower() for is_element, name in declarations if is_element}
        fresh = _fresh_name(root_name, taken, rename_suffix_start)
        tops = []
        for name in (plan.output_name(LEFT_SIDE, r1), plan.output_name(RIGHT_SIDE, r2)):
            if name not in tops:
                tops.append(name)
        declarations[(True, fresh)] = XComponent(
            name=fresh, typology=Typology.COMPLEX_ELEMENT, schema_id=GLOBAL_SCHEMA_ID,
        )
        contents.append(MergedElement(
            name=fresh,
            compositor=Compositor.ALL,
            child_refs=tuple(ChildRef(target=t, min_occurs=0, max_occurs=1) for t in tops),
        ))
        logger.info(f"Roots '{r1.name}' and '{r2.name}' not merged; created root '{fresh}'")

    model = SchemaModel(
        schema_id=GLOBAL_SCHEMA_ID,
        components=tuple(declarations.values()),
        child_refs={c.name: c.child_refs for c in contents if c.child_refs},
        attribute_uses={c.name: c.attribute_uses for c in contents if c.attribute_uses},
        compositors={c.name: c.compositor for c in contents if c.child_refs},
    )
    problems = model.invariant_violations()
    if problems:
        raise InconsistentDictionary("; ".join(problems))

    audit = _audit(plan, sides)
    logger.info(
        f"Integrated '{s1.schema_id}' and '{s2.schema_id}' into {len(model.components)} components "
        f"({len(plan.element_merges)} complex merges, {len(plan.renames)} renames)"
    )
    return Integration(schema_model=model, audit=tuple(audit), plan=plan)


def integrate(
    s1: SchemaModel,
    s2: SchemaModel,
    md: MergeDictionary,
    rd: RenameDictionary,
    root_name: str = "root",
    rename_suffix_start: int = 2,
) -> SchemaModel:
    return integrate_with_audit(s1, s2, md, rd, root_name, rename_suffix_start).schema_model
