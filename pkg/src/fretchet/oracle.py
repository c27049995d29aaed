"""Independent verification layer: dense matrices, finite differences and
multiplication counts.

Matrices are numpy arrays with one column per basis vector of the domain
(coordinates as in :func:`fretchet.spaces.to_coords`).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .counting import CostCounter, counting, tally
from .errors import DomainError
from .funterm import FComp, FConst, FLin, FunTerm, bilin, eval_fun, fanout, prim
from .linterm import Comp, ContractL, Id, LinTerm, Unitary, apply, infer_types, term_size
from .spaces import (
    R,
    SpaceTerm,
    TensorSpace,
    VScalar,
    VTensor,
    Vector,
    basis,
    dim,
    from_coords,
    inner,
    real_vector_space,
    shape,
    to_coords,
    vec,
)

DEFAULT_FD_STEP = 1e-4
DEFAULT_FD_RTOL = 1e-5
DEFAULT_FD_ATOL = 1e-10


def fd_step() -> float:
    return float(os.environ.get("FRETCHET_FD_H", DEFAULT_FD_STEP))


def report_tol(default: float) -> float:
    return float(os.environ.get("FRETCHET_TOL", default))


def lower_matrix(f: LinTerm, dom: SpaceTerm | None = None, cod: SpaceTerm | None = None) -> np.ndarray:
    """Dense matrix of ``f``: column ``j`` holds the coordinates of
    ``f(e_j)``."""
    if dom is None or (cod is None and dim(dom) == 0):
        sig = infer_types(f, dom)
        dom, cod = sig.domain, sig.codomain
    cols = [to_coords(apply(f, basis(dom, j))) for j in range(dim(dom))]
    if not cols:
        return np.zeros((dim(cod), 0))
    return np.column_stack(cols)


def fd_jacobian(t: FunTerm, v: Vector, h: float | None = None) -> np.ndarray:
    """Central-difference Jacobian of ``t`` at ``v``."""
    h = fd_step() if h is None else h
    space = shape(v)
    x0 = to_coords(v)
    cols = []
    for j in range(len(x0)):
        e = np.zeros_like(x0)
        e[j] = h
        hi = to_coords(eval_fun(t, from_coords(space, x0 + e)))
        lo = to_coords(eval_fun(t, from_coords(space, x0 - e)))
        cols.append((hi - lo) / (2.0 * h))
    if not cols:
        out = to_coords(eval_fun(t, v))
        return np.zeros((len(out), 0))
    return np.column_stack(cols)


def matrices_close(
    a: np.ndarray, b: np.ndarray, rtol: float = DEFAULT_FD_RTOL, atol: float = DEFAULT_FD_ATOL
) -> bool:
    """Per-entry relative comparison, ``|a−b| ≤ rtol·max(|a|,|b|) + atol``.

    ``atol`` only matters for entries that are exactly zero on one side,
    where finite differences leave rounding noise.
    """
    if a.shape != b.shape:
        return False
    return bool(np.all(np.abs(a - b) <= rtol * np.maximum(np.abs(a), np.abs(b)) + atol))


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        return math.inf
    return float(np.max(np.abs(a - b))) if a.size else 0.0


# ---------------------------------------------------------------------------
# Multiplication counting on Griewank's example f(x) = b · sin(a ⊙ x)
# ---------------------------------------------------------------------------


def griewank_term(a: Vector, b: Vector) -> FunTerm:
    """``x ↦ b · sin(a ⊙ x)`` as a function term ``ℝⁿ → ℝᵐ``."""
    dot_a = FComp(bilin("dot"), fanout(FConst(a), FLin(Id(shape(a)))))
    return FComp(bilin("mul"), fanout(FComp(prim("sin"), dot_a), FConst(b)))


def griewank_derivative(a: Vector, b: Vector, x0: Vector) -> LinTerm:
    """The derivative ``c·(b ⊗ a)`` with ``c = cos(a ⊙ x0)``, as the linear
    term ``(c·(b⊗a) ∗) • ket : ℝⁿ ⊸ ℝᵐ ⊗ ℝ``.

    The output ``d·(b ⊗ 1)`` is the rank-one term ``d·b`` left unexpanded.
    """
    c = math.cos(inner(a, x0))
    payload = VTensor(TensorSpace(shape(b), shape(a)), ((c, b, a),))
    return Comp(ContractL(payload, R), Unitary("ket", shape(a)))


def dense_apply(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Plain row-by-column product; counts ``rows·cols`` multiplications."""
    rows, cols = m.shape
    tally(rows * cols)
    return m @ x


@dataclass(frozen=True)
class GriewankCounts:
    m: int
    n: int
    build: int
    decomposed_apply: int
    dense_apply: int
    term_size: int


def count_mults(action) -> int:
    """Run ``action()`` under a fresh counter and return its tally."""
    with counting() as counter:
        action()
    return counter.scalar_mults


def griewank_counts(m: int = 7, n: int = 5, seed: int = 0) -> GriewankCounts:
    rng = np.random.default_rng(seed)
    a = vec(*rng.uniform(-1, 1, n))
    b = vec(*rng.uniform(-1, 1, m))
    x0 = vec(*rng.uniform(-1, 1, n))
    dx = vec(*rng.uniform(-1, 1, n))

    holder = {}
    build = count_mults(lambda: holder.setdefault("d", griewank_derivative(a, b, x0)))
    deriv = holder["d"]
    decomposed = count_mults(lambda: apply(deriv, dx))
    dense = lower_matrix(deriv, real_vector_space(n), TensorSpace(real_vector_space(m), R))
    dense_count = count_mults(lambda: dense_apply(dense, to_coords(dx)))
    return GriewankCounts(m, n, build, decomposed, dense_count, term_size(deriv))


__all__ = [
    "CostCounter",
    "counting",
    "count_mults",
    "lower_matrix",
    "fd_jacobian",
    "matrices_close",
    "max_abs_diff",
    "griewank_term",
    "griewank_derivative",
    "griewank_counts",
    "dense_apply",
    "GriewankCounts",
    "DomainError",
    "fd_step",
    "report_tol",
]
