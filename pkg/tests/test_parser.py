import pytest
from hypothesis import given, settings

from orbita.errors import DimensionError, ParseError
from orbita.parser import parse_map, parse_point, print_map, print_point, tokenize
from orbita.poly import PolyMap, Polynomial

from conftest import polymaps


def test_parse_examples():
    f = parse_map("vars x,y; f1 = -y; f2 = x + y")
    assert f == PolyMap.affine([[0, -1], [1, 1]], [0, 0])
    assert parse_map("vars x; f1 = x") == PolyMap.identity(1)
    g = parse_map("vars x,y; f1 = x^2 - 1; f2 = y")
    assert g.components[0].as_dict() == {(2, 0): 1, (0, 0): -1}
    assert g.components[1] == Polynomial.variable(2, 1)


def test_parse_accepts_layout_and_trailing_semicolon():
    text = "vars a, b;\n  f2 = (a + 1) * (a - 1);\n  f1 = 2*b^3 - -a;\n"
    f = parse_map(text)
    assert f.components[0].as_dict() == {(0, 3): 2, (1, 0): 1}
    assert f.components[1].as_dict() == {(2, 0): 1, (0, 0): -1}


def test_big_literals_are_exact():
    big = 10**40 + 7
    f = parse_map(f"vars x; f1 = {big}*x - {big}")
    assert f.components[0].as_dict() == {(1,): big, (0,): -big}


@pytest.mark.parametrize(
    "text, kind, line, column",
    [
        ("vars x; f1 = x +", ParseError, 1, 17),
        ("vars x;\nf1 = x $ 1", ParseError, 2, 8),
        ("vars x; f1 = y", ParseError, 1, 14),
        ("vars x; f1 = 1.5*x", ParseError, 1, 15),
        ("vars x; f1 = 2 x", ParseError, 1, 16),
        ("vars x; f1 = x^-1", ParseError, 1, 16),
        ("vars x,y; f1 = x", DimensionError, None, None),
        ("vars x; f1 = x; f2 = x", DimensionError, None, None),
        ("vars x; f1 = x; f1 = x", ParseError, 1, 17),
        ("vars x,x; f1 = x; f2 = x", ParseError, 1, 8),
        ("x; f1 = x", ParseError, 1, 1),
        ("vars x; g1 = x", ParseError, 1, 9),
    ],
)
def test_parse_errors(text, kind, line, column):
    with pytest.raises(kind) as info:
        parse_map(text)
    if kind is ParseError:
        assert (info.value.line, info.value.column) == (line, column)


def test_parse_point():
    assert parse_point("(1, 0)") == (1, 0)
    assert parse_point("(-2)") == (-2,)
    text = "(123456789012345678901234567890, 0)"
    P = parse_point(text)
    assert P[0] == 123456789012345678901234567890
    assert print_point(P) == text
    with pytest.raises(DimensionError):
        parse_point("(1, 2)", dim=3)
    for bad in ("1, 2", "(1,)", "(x, 1)", "(1.0)"):
        with pytest.raises(ParseError):
            parse_point(bad)


def test_print_examples():
    assert print_map(PolyMap.identity(2)) == "vars x,y; f1 = x; f2 = y"
    assert print_map(parse_map("vars x,y; f2 = y + x; f1 = 0 - y")) == "vars x,y; f1 = -y; f2 = x + y"
    assert print_map(PolyMap((Polynomial(1),))) == "vars x; f1 = 0"
    f = parse_map("vars x,y; f1 = 1 + y*x - 3*x^2; f2 = -1")
    assert print_map(f) == "vars x,y; f1 = -3*x^2 + x*y + 1; f2 = -1"


@settings(max_examples=300, deadline=None)
@given(polymaps(dims=(1, 2, 3, 4), coeff=10**12))
def test_round_trip(f):
    text = print_map(f)
    assert parse_map(text) == f
    assert print_map(parse_map(text)) == text


def _delete_each_token(text):
    tokens = tokenize(text)[:-1]
    for k, tok in enumerate(tokens):
        rest = tokens[:k] + tokens[k + 1:]
        yield tok, " ".join(t.text for t in rest)


@settings(max_examples=150, deadline=None)
@given(polymaps(dims=(1, 2, 3)))
def test_token_deletion_is_never_silently_accepted(f):
    text = print_map(f)
    for tok, mutated in _delete_each_token(text):
        try:
            g = parse_map(mutated)
        except (ParseError, DimensionError):
            continue
        # unary minus lets a deletion next to a "-" stay grammatical; it must
        # then change the map
        assert g != f, (tok, mutated)
