"""Class algebra: evaluation semantics, conjunction/disjunction, laws."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from otl import (
    And,
    AttrEquals,
    Contradiction,
    HasAttr,
    InConcept,
    Not,
    Or,
    UnknownIdentifierError,
    concept_conjunction,
    concept_disjunction,
    evaluate_class,
    extension,
    parse,
    subsumes,
    validate_or_raise,
)

from gen import random_expr, valid_random_model
from oracles import oracle_evaluate


def build(source):
    result = parse(source)
    assert result.model is not None, [d.render() for d in result.diagnostics]
    return validate_or_raise(result.model)


def test_red_class_gathers_objects_of_different_concepts(red_things):
    red = red_things.classes["Red"].expr
    assert red == AttrEquals("colour", "red")
    members = evaluate_class(red_things, red)
    assert members == {"unclesFerrari", "lunchApple"}
    concepts = {red_things.objects[oid].concept for oid in members}
    assert concepts == {"Car", "Fruit"}


def test_negated_has_attr_over_fully_described_universe(red_things):
    # every object carries colour, so the complement is empty
    assert evaluate_class(red_things, Not(HasAttr("colour"))) == frozenset()


def test_conjunction_of_concept_and_attribute(red_things):
    expr = And((InConcept("PointingDevice"), AttrEquals("colour", "blue")))
    assert evaluate_class(red_things, expr) == {"thisOpticalMouse"}
    assert evaluate_class(red_things, expr) == oracle_evaluate(red_things, expr)


def test_in_concept_closed_under_subsumption(red_things):
    assert evaluate_class(red_things, InConcept("Thing")) == frozenset(
        red_things.objects
    )
    assert evaluate_class(red_things, InConcept("PointingDevice")) == {
        "thisOpticalMouse"
    }


def test_closed_world_negation(red_things):
    # an object without the attribute satisfies the negation of any test on it
    model = build(
        "concept A := x\n"
        "attribute size : number on A\n"
        "object bare : A\n"
        "object sized : A { size = 2 }\n"
    )
    assert evaluate_class(model, Not(HasAttr("size"))) == {"bare"}
    assert evaluate_class(model, Not(AttrEquals("size", 2))) == {"bare"}


def test_evaluate_unknown_attribute(red_things):
    with pytest.raises(UnknownIdentifierError):
        evaluate_class(red_things, HasAttr("weight"))
    with pytest.raises(UnknownIdentifierError):
        evaluate_class(red_things, InConcept("Ghost"))


def test_conjunction_contradiction_on_coordinates(mouse):
    result = concept_conjunction(mouse, "MechanicalMouse", "OpticalMouse")
    assert isinstance(result, Contradiction)
    assert result.axis == "DetectionMechanism"
    assert set(result.differences) == {"mechanical", "optical"}
    assert "DetectionMechanism" in result.describe()


def test_conjunction_with_itself_is_extension(mouse):
    result = concept_conjunction(mouse, "OpticalMouse", "OpticalMouse")
    assert not isinstance(result, Contradiction)
    assert evaluate_class(mouse, result) == extension(mouse, "OpticalMouse")


def test_conjunction_across_roots_is_intersection(multi_genus):
    result = concept_conjunction(multi_genus, "C1", "C2")
    assert not isinstance(result, Contradiction)
    assert evaluate_class(multi_genus, result) == extension(
        multi_genus, "C1"
    ) & extension(multi_genus, "C2")
    # o3 belongs to C3, which both C1 and C2 subsume
    assert evaluate_class(multi_genus, result) == {"o3"}


def test_conjunction_of_genus_and_specific_is_fine(mouse):
    result = concept_conjunction(mouse, "PointingDevice", "OpticalMouse")
    assert not isinstance(result, Contradiction)
    assert evaluate_class(mouse, result) == extension(mouse, "OpticalMouse")


def test_disjunction_union(mouse):
    expr = concept_disjunction(mouse, ["MechanicalMouse", "OpticalMouse"])
    assert expr == Or((InConcept("MechanicalMouse"), InConcept("OpticalMouse")))
    assert evaluate_class(mouse, expr) == extension(mouse, "MechanicalMouse") | extension(
        mouse, "OpticalMouse"
    )


def test_disjunction_with_own_specific_collapses_to_generic_branch(mouse):
    expr = concept_disjunction(mouse, ["PointingDevice", "OpticalMouse"])
    assert evaluate_class(mouse, expr) == extension(mouse, "PointingDevice")


def test_disjunction_requires_two_distinct(mouse):
    with pytest.raises(ValueError):
        concept_disjunction(mouse, ["OpticalMouse", "OpticalMouse"])
    with pytest.raises(ValueError):
        concept_disjunction(mouse, ["OpticalMouse"])


def test_and_or_arity_enforced():
    with pytest.raises(ValueError):
        And((InConcept("A"),))
    with pytest.raises(ValueError):
        Or(())


# -- algebraic laws -------------------------------------------------------------


@given(st.integers(min_value=0, max_value=10_000))
def test_de_morgan(seed):
    rng = random.Random(seed)
    model = valid_random_model(seed, max_concepts=15, max_objects=15)
    a = random_expr(rng, model, depth=2)
    b = random_expr(rng, model, depth=2)
    left = evaluate_class(model, Not(And((a, b))))
    right = evaluate_class(model, Or((Not(a), Not(b))))
    assert left == right


@given(st.integers(min_value=0, max_value=10_000))
def test_monotonicity_of_in_concept(seed):
    model = valid_random_model(seed, max_concepts=15)
    for c2 in model.concepts:
        for c1 in model.superiors[c2]:
            assert subsumes(model, c1, c2)
            assert evaluate_class(model, InConcept(c2)) <= evaluate_class(
                model, InConcept(c1)
            )


@given(st.integers(min_value=0, max_value=10_000))
def test_evaluate_agrees_with_interpreter_oracle(seed):
    rng = random.Random(seed)
    model = valid_random_model(seed, max_concepts=12, max_objects=15)
    for _ in range(5):
        expr = random_expr(rng, model, depth=3)
        assert evaluate_class(model, expr) == oracle_evaluate(model, expr)


@given(st.integers(min_value=0, max_value=10_000))
def test_contradiction_soundness(seed):
    # when conjunction reports a contradiction, no concept of the model could
    # ever host an object satisfying both sides
    model = valid_random_model(seed, max_concepts=25)
    ids = list(model.concepts)
    rng = random.Random(seed)
    for _ in range(10):
        c1, c2 = rng.choice(ids), rng.choice(ids)
        result = concept_conjunction(model, c1, c2)
        if isinstance(result, Contradiction):
            combined = model.intensions[c1] | model.intensions[c2]
            for other in ids:
                assert not combined <= model.intensions[other]
            assert evaluate_class(
                model, And((InConcept(c1), InConcept(c2)))
            ) == frozenset()
