import pytest

from fretchet.corpus import funterm_corpus, linterm_corpus, named_cases
from fretchet.errors import ParseError
from fretchet.funterm import FComp, FPow, FPrim, PrimOp
from fretchet.linterm import Id, Red, ScaleMap, Unitary, UNITARIES
from fretchet.spaces import (
    R,
    DisjSum,
    Inl,
    Inr,
    Pow,
    Prod,
    Seg,
    TensorSpace,
    TupleSpace,
    VTensor,
    ZeroSpace,
    real_vector_space,
    to_coords,
)
from fretchet.syntax import (
    parse_element,
    parse_fun,
    parse_index,
    parse_lin,
    parse_space,
    parse_vec,
    show_element,
    show_fun,
    show_index,
    show_lin,
    show_space,
    show_vec,
    tokenize,
)


def test_examples():
    assert parse_fun("ln . sin") == FComp(FPrim(PrimOp("ln")), FPrim(PrimOp("sin")))
    red = parse_lin("red {(1,1),(2,1),(3,1)}")
    assert isinstance(red, Red)
    assert red.rel.domain == Seg(3) and red.rel.codomain == Seg(1)
    t = parse_vec("tensor{ 1 * (1,0) (x) (0,1) }")
    assert isinstance(t, VTensor) and len(t.terms) == 1
    assert list(to_coords(t)) == [0, 1, 0, 0]


def test_spaces_and_indices():
    assert parse_space("R^3") == real_vector_space(3)
    assert parse_space("tup(R, ten(R^2, R))") == TupleSpace((R, TensorSpace(real_vector_space(2), R)))
    assert parse_space("0") == ZeroSpace()
    assert parse_space("pow(2*3, R)") == Pow(Prod(Seg(2), Seg(3)), R)
    assert parse_index("1+2") == DisjSum(Seg(1), Seg(2))
    assert parse_element("inl 1") == Inl(1)
    assert parse_element("(2, inr 3)") == (2, Inr(3))


def test_annotations():
    assert parse_lin("id[space=R^2]") == Id(real_vector_space(2))
    assert parse_lin("2 *.") == ScaleMap(2.0)
    assert parse_lin("ttranspose[at=ten(R, R^2)]").at == TensorSpace(R, real_vector_space(2))


def test_pow_disambiguation():
    assert parse_fun("pow 3 sin") == FPow(Seg(3), FPrim(PrimOp("sin")))
    assert parse_fun("pow 2") == FPrim(PrimOp("pow", 2))
    assert parse_fun("pow 2 . sin") == FComp(FPrim(PrimOp("pow", 2)), FPrim(PrimOp("sin")))


def test_sugar_precedence():
    a = parse_fun("sin + cos * exp")
    b = parse_fun("sin + (cos * exp)")
    assert a == b
    assert show_fun(parse_fun("ln . proj 1 + (proj 1 * proj 2) - sin . proj 2")).count("proj") == 4


@pytest.mark.parametrize(
    "src, line, col",
    [
        ("ln . ", 1, 6),
        ("sin .\n  @", 2, 3),
        ("par(sin, cos", 1, 13),
        ("frobnicate", 1, 1),
    ],
)
def test_parse_errors_have_locations(src, line, col):
    with pytest.raises(ParseError) as exc:
        parse_fun(src)
    assert (exc.value.line, exc.value.col) == (line, col)
    assert exc.value.expected


def test_lexer_errors():
    with pytest.raises(ParseError) as exc:
        tokenize("id $")
    assert exc.value.col == 4


def test_trailing_input_rejected():
    with pytest.raises(ParseError):
        parse_lin("id id")
    with pytest.raises(ParseError):
        parse_vec("(1, 2")


def test_unitary_names_round_trip():
    for kind in UNITARIES:
        assert parse_lin(show_lin(Unitary(kind))) == Unitary(kind)


def test_corpus_round_trip():
    for f, dom in linterm_corpus(200, seed=3):
        assert parse_lin(show_lin(f)) == f
        assert parse_space(show_space(dom)) == dom
    for c in funterm_corpus(200, seed=3) + named_cases():
        assert parse_fun(show_fun(c.term)) == c.term
        assert parse_vec(show_vec(c.point)) == c.point


def test_index_round_trip():
    for X in (Seg(4), Prod(Seg(2), DisjSum(Seg(1), Seg(3))), DisjSum(Prod(Seg(1), Seg(1)), Seg(2))):
        assert parse_index(show_index(X)) == X
        for x in X.elements:
            assert parse_element(show_element(x)) == x
