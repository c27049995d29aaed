import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fretchet.adjoint import adjoint, check_adjoint_law, gradient_of_covector
from fretchet.corpus import linterm_corpus, unitary_test_space
from fretchet.errors import TermTypeError
from fretchet.linterm import (
    UNITARIES,
    UNITARY_INVERSE,
    Comp,
    ContractL,
    Id,
    Inj,
    Proj,
    Red,
    ScaleMap,
    Unitary,
    ZeroMap,
    annotate,
    apply,
    infer_types,
    scan,
)
from fretchet.oracle import lower_matrix
from fretchet.spaces import R, Pow, Relation, Seg, TensorSpace, VScalar, real_vector_space, to_coords, vec, vectors_close

R2 = real_vector_space(2)


def test_adjoint_of_scan_reverses_the_relation():
    a = adjoint(scan(3))
    assert isinstance(a, Red)
    assert a.rel == Relation(Seg(3), Seg(3), tuple((j, i) for i in range(1, 4) for j in range(i, 4)))
    assert vectors_close(apply(a, vec(1, 1, 1)), vec(3, 2, 1))


def test_structural_rules():
    X = Seg(3)
    assert isinstance(adjoint(Inj(2, X)), Proj)
    assert adjoint(Inj(2, X)).y == 2
    assert adjoint(Id(R2)) == Id(R2)
    assert adjoint(ScaleMap(4.0)) == ScaleMap(4.0)
    assert adjoint(ZeroMap(R, R2)) == ZeroMap(R2, R)
    g, f = scan(3), ScaleMap(2.0)
    assert adjoint(Comp(g, f)) == Comp(adjoint(f), adjoint(g))
    for kind in UNITARIES:
        assert adjoint(Unitary(kind)).kind == UNITARY_INVERSE[kind]


def test_adjoint_law_checks():
    assert check_adjoint_law(annotate(scan(3), real_vector_space(3)), 100, 1e-10).passed
    assert check_adjoint_law(annotate(Unitary("ttranspose"), TensorSpace(R2, real_vector_space(3))), 100, 1e-10).passed
    assert check_adjoint_law(ZeroMap(R2, real_vector_space(3)), 10, 0.0).passed


def test_gradient_of_covector():
    # v ↦ ibra(bra(2,3) ∗ ket(v)) = 2v₁ + 3v₂
    covector = Comp(Unitary("ibra"), Comp(ContractL(apply(Unitary("bra"), vec(2, 3)), R), Unitary("ket")))
    g = gradient_of_covector(annotate(covector, Pow(Seg(2), R)))
    np.testing.assert_allclose(to_coords(g), [2, 3])
    np.testing.assert_array_equal(to_coords(gradient_of_covector(ZeroMap(R2, R))), [0, 0])
    assert gradient_of_covector(ScaleMap(5.0, R)) == VScalar(5.0)
    with pytest.raises(TermTypeError):
        gradient_of_covector(Id(R2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_involution_and_transpose(seed):
    (f, dom), = linterm_corpus(1, seed=seed, depth=5)
    cod = infer_types(f, dom).codomain
    m = lower_matrix(f, dom, cod)
    np.testing.assert_allclose(lower_matrix(adjoint(f), cod, dom), m.T, atol=1e-12 * max(1.0, np.abs(m).max(initial=0)))
    np.testing.assert_allclose(lower_matrix(adjoint(adjoint(f)), dom, cod), m, atol=1e-12 * max(1.0, np.abs(m).max(initial=0)))


@pytest.mark.parametrize("kind", UNITARIES)
def test_each_unitary_obeys_the_adjoint_law(kind):
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert check_adjoint_law(annotate(Unitary(kind), unitary_test_space(kind, rng)), 20, 1e-12).passed
