"""Classes as logical predicates over objects.

A class gathers the objects satisfying a formula, whatever their concept or
attribute structure.  Expressions combine concept membership, attribute
predicates and boolean connectives; evaluation is closed-world over the
model's declared objects: an object with no value for an attribute fails
both ``HasAttr`` and ``AttrEquals`` and therefore satisfies their negations.

Conjunction and disjunction of concepts yield classes, never new concepts.
Conjoining two concepts whose combined differences clash on an exclusive
axis is reported as a ``Contradiction`` instead of an expression.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from . import model as m


@dataclass(frozen=True)
class InConcept:
    concept: str


@dataclass(frozen=True)
class AttrEquals:
    attribute: str
    value: m.Value


@dataclass(frozen=True)
class HasAttr:
    attribute: str


@dataclass(frozen=True)
class And:
    children: tuple["ClassExpression", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("And requires at least two children")


@dataclass(frozen=True)
class Or:
    children: tuple["ClassExpression", ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("Or requires at least two children")


@dataclass(frozen=True)
class Not:
    child: "ClassExpression"


ClassExpression = Union[InConcept, AttrEquals, HasAttr, And, Or, Not]


@dataclass(frozen=True)
class Contradiction:
    """Report that two concepts cannot be conjoined: an exclusive axis
    forbids combining the clashing differences."""

    axis: str
    differences: tuple[str, ...]
    concepts: tuple[str, str]

    def describe(self) -> str:
        c1, c2 = self.concepts
        clash = ", ".join(self.differences)
        return (
            f"conjunction of '{c1}' and '{c2}' is contradictory: "
            f"exclusive axis '{self.axis}' forbids combining {clash}"
        )


def expression_references(expr: ClassExpression) -> tuple[set[str], set[str]]:
    """Concept and attribute identifiers referenced by an expression."""
    concepts: set[str] = set()
    attributes: set[str] = set()
    stack: list[ClassExpression] = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, InConcept):
            concepts.add(node.concept)
        elif isinstance(node, (AttrEquals, HasAttr)):
            attributes.add(node.attribute)
        elif isinstance(node, (And, Or)):
            stack.extend(node.children)
        else:
            stack.append(node.child)
    return concepts, attributes


def evaluate_class(model: m.Model, expr: ClassExpression) -> frozenset[str]:
    """Set of object identifiers satisfying the expression."""
    model.require_validated("evaluate_class")
    universe = frozenset(model.objects)
    return _evaluate(model, expr, universe)


def _evaluate(model: m.Model, expr: ClassExpression, universe: frozenset[str]) -> frozenset[str]:
    if isinstance(expr, InConcept):
        return m.extension(model, expr.concept)
    if isinstance(expr, AttrEquals):
        _check_attribute(model, expr.attribute)
        return frozenset(
            oid
            for oid in universe
            if expr.attribute in model.objects[oid].values
            and m.values_equal(model.objects[oid].values[expr.attribute], expr.value)
        )
    if isinstance(expr, HasAttr):
        _check_attribute(model, expr.attribute)
        return frozenset(
            oid for oid in universe if expr.attribute in model.objects[oid].values
        )
    if isinstance(expr, And):
        result = _evaluate(model, expr.children[0], universe)
        for child in expr.children[1:]:
            result &= _evaluate(model, child, universe)
        return result
    if isinstance(expr, Or):
        result = _evaluate(model, expr.children[0], universe)
        for child in expr.children[1:]:
            result |= _evaluate(model, child, universe)
        return result
    return universe - _evaluate(model, expr.child, universe)


def _check_attribute(model: m.Model, attribute_id: str) -> None:
    if attribute_id not in model.attributes:
        raise m.UnknownIdentifierError(f"unknown attribute '{attribute_id}'")


def concept_conjunction(
    model: m.Model, c1: str, c2: str
) -> Union[ClassExpression, Contradiction]:
    """Class of objects belonging to both concepts, or a Contradiction when
    the combined intensions clash on an exclusive axis.

    The result is a class: conjunction never mints a new concept.
    """
    model.require_validated("concept_conjunction")
    for cid in (c1, c2):
        if cid not in model.concepts:
            raise m.UnknownIdentifierError(f"unknown concept '{cid}'")
    combined = model.intensions[c1] | model.intensions[c2]
    for axis in model.axes.values():
        if not axis.exclusive:
            continue
        clash = combined.intersection(axis.members)
        if len(clash) >= 2:
            return Contradiction(axis.id, tuple(sorted(clash)), (c1, c2))
    return And((InConcept(c1), InConcept(c2)))


def concept_disjunction(model: m.Model, concepts: Iterable[str]) -> ClassExpression:
    """Class of objects belonging to any of the given concepts.

    Requires at least two distinct concepts; no generic concept is created,
    the union stays a class.
    """
    model.require_validated("concept_disjunction")
    distinct: list[str] = []
    for cid in concepts:
        if cid not in model.concepts:
            raise m.UnknownIdentifierError(f"unknown concept '{cid}'")
        if cid not in distinct:
            distinct.append(cid)
    if len(distinct) < 2:
        raise ValueError("concept_disjunction requires at least two distinct concepts")
    return Or(tuple(InConcept(cid) for cid in distinct))
