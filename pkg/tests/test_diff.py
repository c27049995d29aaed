import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fretchet.corpus import funterm_corpus, ln_sin, named_cases, two_var_example
from fretchet.diff import affine, affine_adj, deriv_signature, gradient, jvp, vjp
from fretchet.errors import DomainError, TermTypeError
from fretchet.funterm import FConst, FLin, fmul, prim
from fretchet.linterm import Id, Inj, Proj, ZeroMap, apply, scan
from fretchet.oracle import fd_jacobian, griewank_term, lower_matrix
from fretchet.spaces import R, Seg, VScalar, VTuple, inner, random_vector, real_vector_space, shape, to_coords, vec

# Closed forms 1/x1 + x2 and x1 − cos x2 evaluated at (2, 5).
B2_GRADIENT = (5.5, 1.7163378145367738)


def at(a, b):
    return VTuple((VScalar(a), VScalar(b)))


def test_ln_sin_derivative_is_cotangent():
    res = affine(ln_sin(), VScalar(math.pi / 4))
    m = lower_matrix(res.deriv, R, R)
    assert m.shape == (1, 1)
    assert m[0, 0] == pytest.approx(1.0, abs=1e-15)


def test_two_variable_forward_and_reverse():
    t = two_var_example()
    np.testing.assert_allclose(lower_matrix(affine(t, at(2, 5)).deriv)[0], B2_GRADIENT, atol=1e-14)
    adj = affine_adj(t, at(2, 5)).adj_deriv
    np.testing.assert_allclose(to_coords(apply(adj, VScalar(1.0))), B2_GRADIENT, atol=1e-14)
    np.testing.assert_allclose(to_coords(gradient(t, at(2, 5))), B2_GRADIENT, atol=1e-14)


def test_linear_terms_are_their_own_derivative():
    h = scan(3)
    res = affine(FLin(h), vec(1, 2, 3))
    assert res.deriv.rel == h.rel
    np.testing.assert_array_equal(to_coords(res.value), [1, 3, 6])


def test_constant_and_injection_adjoints():
    assert isinstance(affine_adj(FConst(vec(1, 2)), VScalar(3.0)).adj_deriv, ZeroMap)
    adj = affine_adj(FLin(Inj(1, Seg(2))), VScalar(3.0)).adj_deriv
    assert isinstance(adj, Proj) and adj.y == 1


def test_jvp_identity():
    dv = vec(0.5, -1.5)
    np.testing.assert_array_equal(to_coords(jvp(FLin(Id()), vec(1, 2), dv)), to_coords(dv))


def test_griewank_vjp():
    t = griewank_term(vec(1, 2), vec(3))
    np.testing.assert_allclose(to_coords(vjp(t, vec(0, 0), vec(1))), [3, 6], atol=1e-15)


def test_gradient_needs_scalar_codomain():
    with pytest.raises(TermTypeError):
        gradient(FLin(Id()), vec(1, 2))


def test_domain_error_aborts():
    with pytest.raises(DomainError):
        affine(two_var_example(), at(-1.0, 0.0))
    with pytest.raises(DomainError):
        affine_adj(ln_sin(), VScalar(0.0))


def test_deriv_signature():
    sig = deriv_signature(two_var_example(), at(2, 5))
    assert to_coords(random_vector(sig.codomain, np.random.default_rng(0))).shape == (1,)


def test_named_cases_against_finite_differences():
    for c in named_cases():
        res = affine(c.term, c.point)
        np.testing.assert_allclose(
            lower_matrix(res.deriv, c.domain, shape(res.value)),
            fd_jacobian(c.term, c.point, 1e-4),
            rtol=1e-5,
            atol=1e-7,
            err_msg=c.name,
        )


CASES = funterm_corpus(60, seed=99)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CASES), st.integers(0, 2**32 - 1))
def test_gradient_inner_identity(case, seed):
    """⟨adj f'(v) dy, dv⟩ = ⟨dy, f'(v) dv⟩ for random dv, dy."""
    rng = np.random.default_rng(seed)
    dv = random_vector(case.domain, rng)
    fwd = jvp(case.term, case.point, dv)
    dy = random_vector(shape(fwd), rng)
    assert inner(vjp(case.term, case.point, dy), dv) == pytest.approx(inner(dy, fwd), abs=1e-9)


def test_product_rule():
    t = fmul(prim("sin"), prim("exp"))
    x = 0.8
    g = to_coords(gradient(t, VScalar(x)))[0]
    assert g == pytest.approx(math.cos(x) * math.exp(x) + math.sin(x) * math.exp(x), abs=1e-14)
