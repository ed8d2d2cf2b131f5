"""Validation diagnostics and the derived hierarchy."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from otl import (
    Concept,
    Model,
    PartLink,
    Severity,
    UnknownIdentifierError,
    classify_object,
    compute_hierarchy,
    coordinates,
    extension,
    has_errors,
    parse,
    subsumes,
    validate,
    validate_or_raise,
)
from otl.model import DIAGNOSTIC_CODES

from conftest import load_fixture
from gen import valid_random_model
from oracles import oracle_classify, oracle_direct_super, oracle_subsumes


def parse_ok(source):
    result = parse(source)
    assert result.model is not None, [d.render() for d in result.diagnostics]
    return result.model


def codes(diagnostics):
    return [d.code for d in diagnostics]


# -- validator diagnostics ----------------------------------------------------


def test_duplicate_intension_single_diagnostic():
    model = parse_ok(
        "concept PointingDevice\n"
        "axis DetectionMechanism of PointingDevice { mechanical, optical }\n"
        "concept OpticalMouse := PointingDevice + optical\n"
        "concept LaserMouse := PointingDevice + optical\n"
    )
    diagnostics = validate(model)
    assert codes(diagnostics).count("E_DUP_INTENSION") == 1
    (diag,) = [d for d in diagnostics if d.code == "E_DUP_INTENSION"]
    assert "'LaserMouse'" in diag.message and "'OpticalMouse'" in diag.message


def test_no_delimiting_characteristic():
    model = Model()
    model.concepts["G"] = Concept("G", "G", None, ("g",))
    model.concepts["S"] = Concept("S", "S", "G", ())
    diagnostics = validate(model)
    assert codes(diagnostics).count("E_NO_DELIMITING") == 1
    # the intension collision with the genus is a consequence, not a second fault
    assert "E_DUP_INTENSION" not in codes(diagnostics)


def test_axis_contradiction():
    model = parse_ok(
        "concept PointingDevice\n"
        "axis DetectionMechanism of PointingDevice { mechanical, optical }\n"
        "concept Both := PointingDevice + mechanical, optical\n"
    )
    diagnostics = validate(model)
    (diag,) = [d for d in diagnostics if d.code == "E_AXIS_CONTRADICTION"]
    assert "DetectionMechanism" in diag.message


def test_nonexclusive_axis_allows_combination():
    model = parse_ok(
        "concept G\n"
        "axis K of G nonexclusive { a, b }\n"
        "concept Both := G + a, b\n"
    )
    assert validate(model) == []


def test_unresolved_genus():
    model = parse_ok("concept X := Ghost + a\n")
    diagnostics = validate(model)
    assert "E_UNRESOLVED" in codes(diagnostics)


def test_genus_cycle_detected_once():
    model = Model()
    model.concepts["A"] = Concept("A", "A", "B", ("x",))
    model.concepts["B"] = Concept("B", "B", "A", ("y",))
    diagnostics = validate(model)
    assert codes(diagnostics).count("E_GENUS_CYCLE") == 1


def test_redundant_differentia():
    model = parse_ok("concept G := g\nconcept S := G + g, s\n")
    diagnostics = validate(model)
    assert "E_REDUNDANT_DIFFERENTIA" in codes(diagnostics)


def test_axis_arity():
    model = Model()
    model.concepts["G"] = Concept("G", "G")
    from otl import Axis

    model.axes["K"] = Axis("K", "K", "G", ("only",))
    diagnostics = validate(model)
    assert "E_AXIS_ARITY" in codes(diagnostics)


def test_axis_arity_from_dsl():
    model = parse_ok("concept G\naxis K of G { only }\n")
    assert "E_AXIS_ARITY" in codes(validate(model))


def test_axis_scope_violation():
    model = parse_ok(
        "concept A := x\n"
        "concept B := y\n"
        "axis K of A { p, q }\n"
        "concept Bad := B + p\n"
    )
    diagnostics = validate(model)
    assert "E_AXIS_SCOPE" in codes(diagnostics)


def test_axis_scope_satisfied_under_scope():
    model = parse_ok(
        "concept A := x\n"
        "axis K of A { p, q }\n"
        "concept Good := A + p\n"
    )
    assert validate(model) == []


def test_attribute_domain_violation():
    model = parse_ok(
        "concept A := x\n"
        "concept B := y\n"
        "attribute size : number on A\n"
        "object bob : B { size = 3 }\n"
    )
    diagnostics = validate(model)
    assert "E_ATTR_DOMAIN" in codes(diagnostics)


def test_attribute_value_kind_violation():
    model = parse_ok(
        "concept A := x\n"
        "attribute size : number on A\n"
        'object al : A { size = "big" }\n'
    )
    diagnostics = validate(model)
    assert "E_ATTR_VALUE" in codes(diagnostics)


def test_part_cycle():
    model = parse_ok(
        "concept A := x\nconcept B := y\npart A has B\npart B has A\n"
    )
    diagnostics = validate(model)
    assert codes(diagnostics).count("E_PART_CYCLE") == 1


def test_part_self_loop():
    model = Model()
    model.concepts["A"] = Concept("A", "A")
    model.parts.append(PartLink("A", "A"))
    diagnostics = validate(model)
    assert "E_PART_CYCLE" in codes(diagnostics)


def test_part_chain_without_cycle_is_fine():
    model = parse_ok(
        "concept A := x\nconcept B := y\nconcept C := z\n"
        "part A has B\npart B has C\n"
    )
    assert validate(model) == []


def test_undistinguished_coordinates_warning_next_to_dup_intension():
    model = Model()
    model.concepts["G"] = Concept("G", "G", None, ("g",))
    model.concepts["A"] = Concept("A", "A", "G", ("d",))
    model.concepts["B"] = Concept("B", "B", "G", ("d",))
    diagnostics = validate(model)
    assert "E_DUP_INTENSION" in codes(diagnostics)
    assert "W_UNDISTINGUISHED_COORDINATES" in codes(diagnostics)


def test_no_preferred_term_warning():
    model = parse_ok(load_fixture("terms.otl"))
    diagnostics = validate(model)
    warnings = [d for d in diagnostics if d.code == "W_NO_PREFERRED_TERM"]
    assert len(warnings) == 1
    assert "'Device'" in warnings[0].message
    assert warnings[0].severity is Severity.WARNING


def test_warnings_do_not_block_validation():
    model = parse_ok(load_fixture("terms.otl"))
    diagnostics = validate(model)
    assert not has_errors(diagnostics)
    assert model.validated


def test_all_emitted_codes_are_catalogued():
    sources = [
        "concept X := Y + ;",
        "concept A\nconcept A\n",
        "concept X := Ghost + a\n",
        "concept G := g\nconcept S := G + g\n",
    ]
    for source in sources:
        result = parse(source)
        diagnostics = list(result.diagnostics)
        if result.model is not None:
            diagnostics += validate(result.model)
        assert all(d.code in DIAGNOSTIC_CODES for d in diagnostics)


def test_diagnostics_ordered_by_source_position():
    source = (
        "concept B := Ghost + b\n"
        "concept A := Ghost2 + a\n"
    )
    model = parse_ok(source)
    diagnostics = validate(model)
    lines = [d.location.line for d in diagnostics]
    assert lines == sorted(lines)


def test_diagnostic_render_format():
    model = parse_ok("concept X := Ghost + a\n")
    (diag,) = validate(model)
    rendered = diag.render()
    severity, code, location, rest = rendered.split(" ", 3)
    assert severity == "ERROR"
    assert code == "E_UNRESOLVED"
    assert location == "<input>:1:9"
    assert rest


def test_axis_backreferences_filled(mouse):
    axis = mouse.axes["DetectionMechanism"]
    for member in axis.members:
        assert mouse.differences[member].axis == axis.id
    free = [d for d in mouse.differences.values() if d.axis is None]
    assert free == []


def test_free_standing_difference_has_no_axis(porphyry):
    assert porphyry.differences["mortal"].axis is None
    assert porphyry.differences["rational"].axis == "Rationality"


# -- subsumes ------------------------------------------------------------------


def test_subsumes_is_irreflexive(mouse):
    for cid in mouse.concepts:
        assert not subsumes(mouse, cid, cid)


def test_subsumes_triple(multi_genus):
    assert subsumes(multi_genus, "C1", "C3")
    assert subsumes(multi_genus, "C2", "C3")
    assert not subsumes(multi_genus, "C1", "C2")
    assert not subsumes(multi_genus, "C2", "C1")


def test_subsumes_on_mouse_matches_oracle(mouse):
    for c1 in mouse.concepts:
        for c2 in mouse.concepts:
            assert subsumes(mouse, c1, c2) == oracle_subsumes(mouse, c1, c2)
    assert subsumes(mouse, "PointingDevice", "OpticalMouse")


def test_subsumes_unknown_identifier(mouse):
    with pytest.raises(UnknownIdentifierError):
        subsumes(mouse, "PointingDevice", "Ghost")


# -- hierarchy -----------------------------------------------------------------


def test_singleton_hierarchy():
    model = validate_or_raise(parse_ok("concept Only\n"))
    hierarchy = compute_hierarchy(model)
    assert hierarchy.roots == {"Only"}
    assert hierarchy.direct_super["Only"] == frozenset()


def test_triple_direct_super(multi_genus):
    hierarchy = compute_hierarchy(multi_genus)
    assert hierarchy.direct_super["C3"] == {"C1", "C2"}
    assert hierarchy.roots == {"C1", "C2"}


def test_hierarchy_subsumes_method_agrees(multi_genus):
    hierarchy = compute_hierarchy(multi_genus)
    for c1 in multi_genus.concepts:
        for c2 in multi_genus.concepts:
            assert hierarchy.subsumes(c1, c2) == subsumes(multi_genus, c1, c2)


def test_porphyry_chain_is_covering_chain(porphyry):
    hierarchy = compute_hierarchy(porphyry)
    chain = ["Substance", "Body", "LivingThing", "Animal", "Human"]
    for upper, lower in zip(chain, chain[1:]):
        assert hierarchy.direct_super[lower] == {upper}
    assert hierarchy.direct_super["Human"] == {"Animal"}
    assert hierarchy.roots == {"Substance"}
    assert oracle_direct_super(porphyry) == {
        c: set(hierarchy.direct_super[c]) for c in porphyry.concepts
    }


# -- coordinates ---------------------------------------------------------------


def test_coordinates_of_mechanical_mouse(mouse):
    assert coordinates(mouse, "MechanicalMouse") == {"OpticalMouse"}


def test_coordinates_only_child():
    model = validate_or_raise(parse_ok("concept G\nconcept S := G + s\n"))
    assert coordinates(model, "S") == frozenset()


def test_coordinates_of_roots_empty(multi_genus):
    # C1 and C2 are roots: no shared superordinate, hence no coordination
    assert coordinates(multi_genus, "C1") == frozenset()
    assert coordinates(multi_genus, "C2") == frozenset()


def test_coordinates_with_shared_root():
    model = validate_or_raise(
        parse_ok("concept Top\nconcept C1 := Top + a\nconcept C2 := Top + b\n")
    )
    assert coordinates(model, "C1") == {"C2"}


# -- classify_object ------------------------------------------------------------


def test_classify_mouse_object(mouse):
    assert classify_object(mouse, "thisOpticalMouse") == [
        "OpticalMouse",
        "PointingDevice",
    ]


def test_classify_root_object():
    model = validate_or_raise(parse_ok("concept Top\nobject t : Top\n"))
    assert classify_object(model, "t") == ["Top"]


def test_classify_multi_genus_object(multi_genus):
    assert classify_object(multi_genus, "o3") == ["C3", "C1", "C2"]


def test_classify_unknown_object(mouse):
    with pytest.raises(UnknownIdentifierError):
        classify_object(mouse, "ghost")


# -- properties over random models ----------------------------------------------


@given(st.integers(min_value=0, max_value=10_000))
def test_strict_partial_order(seed):
    model = valid_random_model(seed)
    ids = list(model.concepts)
    sup = model.superiors
    for c in ids:
        assert c not in sup[c]  # irreflexive
    for c2 in ids:
        for c1 in sup[c2]:
            assert c2 not in sup[c1]  # asymmetric
            assert sup[c1] <= sup[c2] - {c1}  # transitive


@given(st.integers(min_value=0, max_value=10_000))
def test_subsumes_equals_oracle(seed):
    model = valid_random_model(seed, max_concepts=20)
    for c1 in model.concepts:
        for c2 in model.concepts:
            assert subsumes(model, c1, c2) == oracle_subsumes(model, c1, c2)


@given(st.integers(min_value=0, max_value=10_000))
def test_covering_edges_add_a_differentia(seed):
    model = valid_random_model(seed)
    hierarchy = compute_hierarchy(model)
    for specific, supers in hierarchy.direct_super.items():
        for generic in supers:
            assert model.intensions[specific] - model.intensions[generic]


@given(st.integers(min_value=0, max_value=10_000))
def test_coordinates_are_distinguished(seed):
    model = valid_random_model(seed)
    hierarchy = compute_hierarchy(model)
    for genus, children in hierarchy.direct_sub.items():
        relatives = [
            model.intensions[c] - model.intensions[genus] for c in sorted(children)
        ]
        assert len(set(relatives)) == len(relatives)


@given(st.integers(min_value=0, max_value=10_000))
def test_extension_duality(seed):
    model = valid_random_model(seed, max_concepts=20)
    for c2 in model.concepts:
        for c1 in model.superiors[c2]:
            assert extension(model, c2) <= extension(model, c1)


@given(st.integers(min_value=0, max_value=10_000))
def test_classify_matches_oracle(seed):
    model = valid_random_model(seed, max_concepts=20)
    for oid in model.objects:
        assert classify_object(model, oid) == oracle_classify(model, oid)
