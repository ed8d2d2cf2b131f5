"""Lexer/parser behavior: fixtures, diagnostics, totality, spans, speed."""

import time
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from otl import (
    And,
    AttrEquals,
    HasAttr,
    InConcept,
    Not,
    Or,
    ParseError,
    RelationKind,
    SourceSpan,
    TermStatus,
    parse,
    parse_class_expr,
)

from conftest import load_fixture


def errors(result):
    return [d for d in result.diagnostics if d.is_error]


def test_empty_source_gives_empty_model():
    result = parse("")
    assert result.diagnostics == []
    assert result.model is not None
    assert not result.model.concepts
    assert not result.model.objects


def test_mouse_fixture_counts():
    result = parse(load_fixture("mouse.otl"), "mouse.otl")
    assert result.diagnostics == []
    model = result.model
    assert len(model.axes) == 1
    assert len(model.concepts) == 3
    assert len(model.attributes) == 1
    assert len(model.objects) == 1
    assert len(model.terms) == 1
    assert model.concepts["OpticalMouse"].genus == "PointingDevice"
    assert model.concepts["OpticalMouse"].differentiae == ("optical",)
    assert model.objects["thisOpticalMouse"].values == {"colour": "blue"}
    assert model.terms[0].status is TermStatus.PREFERRED
    assert model.terms[0].language == "en"


def test_missing_differentia_is_syntax_error_at_semicolon():
    result = parse("concept X := Y + ;", "bad.otl")
    assert result.model is None
    (diag,) = errors(result)
    assert diag.code == "E_SYN"
    assert isinstance(diag.location, SourceSpan)
    assert (diag.location.line, diag.location.column) == (1, 18)
    assert "difference identifier" in diag.message


def test_root_concept_with_differentiae():
    result = parse("concept C1 := a, b")
    concept = result.model.concepts["C1"]
    assert concept.genus is None
    assert concept.differentiae == ("a", "b")


def test_duplicate_declaration_reported():
    result = parse("concept A\nconcept A := x\n")
    assert result.model is None
    (diag,) = errors(result)
    assert diag.code == "E_DUP_DECL"
    assert diag.location.line == 2


def test_duplicate_term_triple_reported():
    source = (
        'concept A := x\n'
        'term "a" (en, preferred) for A\n'
        'term "a" (en, admitted) for A\n'
    )
    result = parse(source)
    (diag,) = errors(result)
    assert diag.code == "E_DUP_DECL"


def test_shared_axis_member_reported():
    source = "concept G\naxis K of G { a, b }\naxis L of G { b, c }\n"
    result = parse(source)
    (diag,) = errors(result)
    assert diag.code == "E_DUP_DECL"
    assert "'b'" in diag.message


def test_parser_recovers_and_reports_multiple_errors():
    source = "concept X := Y + ;\nwhatever\nconcept Z\n"
    result = parse(source)
    assert result.model is None
    codes = [d.code for d in errors(result)]
    assert codes == ["E_SYN", "E_SYN"]
    # recovery still parsed the good line: no diagnostic mentions Z
    assert not any("Z" in d.message for d in result.diagnostics)


def test_unterminated_string_is_lex_error():
    result = parse('term "open (en, preferred) for A')
    assert any(d.code == "E_LEX" for d in result.diagnostics)
    assert result.model is None


def test_unexpected_character_is_lex_error():
    result = parse("concept A\n$\n")
    assert any(d.code == "E_LEX" for d in result.diagnostics)


def test_semicolon_separates_statements():
    result = parse("concept A; concept B := A + x; object o : B")
    assert result.diagnostics == []
    assert list(result.model.concepts) == ["A", "B"]
    assert "o" in result.model.objects


def test_multiline_object_block():
    source = 'concept A\nattribute size : number on A\nobject o : A {\n  size = -2.5\n}\n'
    result = parse(source)
    assert result.diagnostics == []
    assert result.model.objects["o"].values == {"size": Decimal("-2.5")}


def test_comments_ignored():
    result = parse("# heading\nconcept A # trailing\n")
    assert result.diagnostics == []
    assert list(result.model.concepts) == ["A"]


def test_empty_object_block_is_syntax_error():
    result = parse("concept A\nobject o : A { }\n")
    assert result.model is None
    assert any(
        d.code == "E_SYN" and "attribute identifier" in d.message
        for d in result.diagnostics
    )


def test_dangling_concept_assign():
    result = parse("concept X :=")
    (diag,) = errors(result)
    assert diag.code == "E_SYN"
    assert "genus or difference identifier" in diag.message


def test_relation_aliases_normalize():
    source = "concept A\nconcept B := A + x\nrelation r1 (cause_effect) A -> B\n"
    result = parse(source)
    assert result.diagnostics == []
    assert result.model.relations[0].relation_type is RelationKind.CAUSAL


def test_string_escapes_round_trip_through_lexer():
    result = parse('concept A\nterm "say \\"hi\\"\\n" (en, preferred) for A\n')
    assert result.diagnostics == []
    assert result.model.terms[0].designation == 'say "hi"\n'


# -- class expressions -------------------------------------------------------


def test_parse_class_expr_attribute_equality():
    assert parse_class_expr('colour = "red"') == AttrEquals("colour", "red")


def test_parse_class_expr_precedence_and_shape():
    expr = parse_class_expr('in Animal and not colour = "red"')
    assert expr == And((InConcept("Animal"), Not(AttrEquals("colour", "red"))))


def test_parse_class_expr_or_binds_loosest():
    expr = parse_class_expr('in A and in B or has size')
    assert expr == Or((And((InConcept("A"), InConcept("B"))), HasAttr("size")))


def test_parse_class_expr_parens_override():
    expr = parse_class_expr('in A and (in B or has size)')
    assert expr == And((InConcept("A"), Or((InConcept("B"), HasAttr("size")))))


def test_parse_class_expr_unbalanced_paren():
    with pytest.raises(ParseError) as exc:
        parse_class_expr("(")
    assert exc.value.diagnostic.code == "E_SYN"


def test_parse_class_expr_trailing_garbage():
    with pytest.raises(ParseError):
        parse_class_expr("in A in B")


def test_parse_class_expr_values():
    assert parse_class_expr("size = 2.5") == AttrEquals("size", Decimal("2.5"))
    assert parse_class_expr("flag = true") == AttrEquals("flag", True)


def test_deeply_nested_parens_rejected_not_crashed():
    depth = 100_000
    source = "(" * depth + "in A" + ")" * depth
    with pytest.raises(ParseError) as exc:
        parse_class_expr(source)
    assert "nested" in exc.value.diagnostic.message


def test_long_not_chain_parses_iteratively():
    expr = parse_class_expr("not " * 5_000 + "in A")
    for _ in range(5_000):
        assert isinstance(expr, Not)
        expr = expr.child
    assert expr == InConcept("A")


# -- totality and performance -------------------------------------------------


@given(st.text(max_size=300))
@settings(max_examples=200)
def test_parse_is_total_and_spans_stay_in_bounds(source):
    result = parse(source, "fuzz.otl")
    assert (result.model is not None) == (not errors(result))
    lines = source.split("\n")
    for diag in result.diagnostics:
        span = diag.location
        assert isinstance(span, SourceSpan)
        assert 1 <= span.line <= max(1, len(lines))
        line_text = lines[span.line - 1] if span.line <= len(lines) else ""
        assert 1 <= span.column <= len(line_text) + 1


def test_parse_runtime_stays_linear_on_large_input():
    # ~100k tokens of statements
    lines = ["concept C0"]
    lines += [f"concept C{i} := C0 + d{i}" for i in range(1, 12_500)]
    source = "\n".join(lines)
    start = time.perf_counter()
    result = parse(source)
    elapsed = time.perf_counter() - start
    assert result.diagnostics == []
    assert len(result.model.concepts) == 12_500
    assert elapsed < 10.0

    # ~100k tokens of one flat expression chain
    expr_source = " or ".join(f"a{i} = {i}" for i in range(20_000))
    start = time.perf_counter()
    expr = parse_class_expr(expr_source)
    elapsed = time.perf_counter() - start
    assert isinstance(expr, Or)
    assert len(expr.children) == 20_000
    assert elapsed < 10.0
