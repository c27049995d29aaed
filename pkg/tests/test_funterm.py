import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fretchet.corpus import ln_sin, two_var_example
from fretchet.errors import DomainError, ShapeError, TermTypeError
from fretchet.funterm import (
    BILINEAR_NAMES,
    BilinOp,
    FConst,
    FLin,
    FPow,
    PrimOp,
    bilin,
    eval_fun,
    fadd,
    fmul,
    fsub,
    fun_codomain,
    prim,
    sections,
)
from fretchet.linterm import Proj, apply, infer_types
from fretchet.nn import weight_tensor
from fretchet.spaces import (
    R,
    Seg,
    TensorSpace,
    TupleSpace,
    VScalar,
    VTuple,
    random_vector,
    real_vector_space,
    same_space,
    scalar_value,
    tensor,
    to_coords,
    vec,
    vec_add,
    vec_scale,
)

R2 = real_vector_space(2)
R3 = real_vector_space(3)
P1, P2 = FLin(Proj(1)), FLin(Proj(2))


def pair(a, b):
    return VTuple((VScalar(a), VScalar(b)))


def test_named_examples_evaluate():
    assert scalar_value(eval_fun(two_var_example(), pair(2, 5))) == pytest.approx(math.log(2) + 10 - math.sin(5))
    assert scalar_value(eval_fun(two_var_example(), pair(2, 5))) == pytest.approx(11.652071455223084, abs=1e-12)
    assert scalar_value(eval_fun(ln_sin(), VScalar(math.pi / 2))) == pytest.approx(0.0, abs=1e-15)
    w = vec(1, 2)
    assert eval_fun(FConst(w), VScalar(9.0)) is w


def test_sugar():
    assert scalar_value(eval_fun(fadd(prim("sin"), prim("cos")), VScalar(0.0))) == 1.0
    assert scalar_value(eval_fun(fmul(P1, P2), pair(2, 5))) == 10.0
    f = prim("exp")
    assert scalar_value(eval_fun(fsub(f, f), VScalar(0.7))) == 0.0


def test_domain_errors():
    with pytest.raises(DomainError):
        eval_fun(prim("ln"), VScalar(0.0))
    with pytest.raises(DomainError):
        eval_fun(prim("pow", -1), VScalar(0.0))
    with pytest.raises(DomainError):
        eval_fun(prim("exp"), VScalar(1e6))


def test_bad_primitives():
    with pytest.raises(ValueError):
        PrimOp("sqrt")
    with pytest.raises(ValueError):
        PrimOp("pow", 0)
    with pytest.raises(ValueError):
        BilinOp("cross")


def test_prim_needs_scalar():
    with pytest.raises(ShapeError):
        eval_fun(prim("sin"), vec(1, 2))
    with pytest.raises(TermTypeError):
        fun_codomain(prim("sin"), R2)


def test_prim_derivative_table():
    x = 0.3
    assert PrimOp("tanh").slope(x) == pytest.approx(1 - math.tanh(x) ** 2)
    assert PrimOp("pow", 3).slope(x) == pytest.approx(3 * x * x)
    assert PrimOp("ln").deriv_at(x).k == pytest.approx(1 / x)


def test_sections():
    s = sections(BilinOp("mul"), "L", VScalar(3.0), R)
    assert apply(s, VScalar(2.0)) == VScalar(6.0)
    a, b = vec(1, 2, 3), vec(4, 5)
    W = tensor(b, a)
    mv = sections(BilinOp("matvec"), "L", W, R3)
    v = vec(1, -1, 2)
    dense = np.outer([4, 5], [1, 2, 3]) @ np.array([1, -1, 2])
    np.testing.assert_allclose(to_coords(apply(mv, v)), dense)
    dot = sections(BilinOp("dot"), "R", vec(2, 3), R2)
    assert scalar_value(apply(dot, vec(1, 1))) == 5.0
    with pytest.raises(ValueError):
        sections(BilinOp("dot"), "up", vec(1), R)


def test_fpow_maps_componentwise():
    v = vec(0.1, 0.2, 0.3)
    out = eval_fun(FPow(Seg(3), prim("sin")), v)
    np.testing.assert_array_equal(to_coords(out), [math.sin(0.1), math.sin(0.2), math.sin(0.3)])


def test_codomains():
    assert same_space(fun_codomain(bilin("tensor"), TupleSpace((R2, R3))), TensorSpace(R2, R3))
    assert same_space(fun_codomain(two_var_example(), TupleSpace((R, R))), R)


BILIN_DOMAINS = {
    "contract": (TensorSpace(R2, R3), TensorSpace(R3, R2)),
    "tensor": (R2, R3),
    "dot": (R3, R3),
    "mul": (R, R),
    "matvec": (TensorSpace(R2, R3), R3),
    "hadamard": (R3, R3),
}


def test_every_bilinear_operator_has_a_test_domain():
    assert set(BILIN_DOMAINS) == set(BILINEAR_NAMES)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(BILINEAR_NAMES), st.integers(0, 2**32 - 1), st.floats(-2, 2))
def test_bilinearity_through_sections(name, seed, k):
    rng = np.random.default_rng(seed)
    A, B = BILIN_DOMAINS[name]
    b = BilinOp(name)
    u, u2 = random_vector(A, rng), random_vector(A, rng)
    v, v2 = random_vector(B, rng), random_vector(B, rng)
    lhs = to_coords(b.apply2(u, vec_add(v, vec_scale(k, v2))))
    rhs = to_coords(b.apply2(u, v)) + k * to_coords(b.apply2(u, v2))
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)
    lhs = to_coords(b.apply2(vec_add(u, vec_scale(k, u2)), v))
    rhs = to_coords(b.apply2(u, v)) + k * to_coords(b.apply2(u2, v))
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)
    np.testing.assert_allclose(to_coords(apply(b.section_left(u, B), v)), to_coords(b.apply2(u, v)), atol=1e-12)
    np.testing.assert_allclose(to_coords(apply(b.section_right(v, A), u)), to_coords(b.apply2(u, v)), atol=1e-12)


def test_weight_tensor_forms_agree():
    rows = [[0.5, -1.0], [2.0, 0.25], [1.0, 1.0]]
    x = vec(0.3, -0.7)
    as_rows = bilin("matvec")
    dense = np.array(rows) @ np.array([0.3, -0.7])
    np.testing.assert_allclose(to_coords(eval_fun(as_rows, VTuple((weight_tensor(rows), x)))), dense, atol=1e-12)
    assert infer_types(sections(BilinOp("matvec"), "L", weight_tensor(rows), R2)).codomain is not None
