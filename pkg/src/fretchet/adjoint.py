"""Symbolic adjoints of linear terms.

Every constructor has a rule, so :func:`adjoint` is total on well-typed
terms.  Composition reverses, relations transpose, injections and
projections swap, unitaries invert, and contraction payloads have their
tensor factors swapped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TermTypeError
from .linterm import (
    UNITARY_INVERSE,
    Comp,
    ContractL,
    ContractR,
    Fanout,
    Id,
    Inj,
    LinTerm,
    ParMap,
    PlusMap,
    PowMap,
    Proj,
    Red,
    ScaleMap,
    Unitary,
    ZeroMap,
    apply,
    infer_types,
    sum_over,
    unitary_codomain,
)
from .spaces import R, Seg, VScalar, Vector, inner, random_vector, same_space, transpose_tensor


def adjoint(f: LinTerm) -> LinTerm:
    if isinstance(f, Id):
        return f
    if isinstance(f, ZeroMap):
        return ZeroMap(f.cod, f.dom)
    if isinstance(f, Comp):
        return Comp(adjoint(f.f), adjoint(f.g))
    if isinstance(f, ScaleMap):
        return f
    if isinstance(f, ContractL):
        return ContractL(transpose_tensor(f.v), f.u)
    if isinstance(f, ContractR):
        return ContractR(transpose_tensor(f.w), f.left)
    if isinstance(f, Inj):
        return Proj(f.y, f.space)
    if isinstance(f, Proj):
        return Inj(f.y, None, f.space)
    if isinstance(f, ParMap):
        return ParMap(tuple(adjoint(p) for p in f.parts), f.index)
    if isinstance(f, PowMap):
        return PowMap(f.index, adjoint(f.f))
    if isinstance(f, Fanout):
        X = f.index if f.index is not None else Seg(len(f.parts))
        return Comp(sum_over(X, f.dom), ParMap(tuple(adjoint(p) for p in f.parts), f.index))
    if isinstance(f, PlusMap):
        return PlusMap(adjoint(f.f), adjoint(f.g))
    if isinstance(f, Red):
        return Red(f.rel.transpose(), f.body)
    if isinstance(f, Unitary):
        at = unitary_codomain(f.kind, f.at) if f.at is not None else None
        return Unitary(UNITARY_INVERSE[f.kind], at)
    raise TermTypeError(f"not a linear term: {f!r}")


@dataclass
class AdjointReport:
    trials: int
    tol: float
    failures: list = field(default_factory=list)
    max_defect: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures


def check_adjoint_law(f: LinTerm, trials: int = 100, tol: float = 1e-10, seed: int = 0) -> AdjointReport:
    """Test ``⟨f v, w⟩ = ⟨v, adj f w⟩`` on random vectors."""
    sig = infer_types(f)
    fa = adjoint(f)
    rng = np.random.default_rng(seed)
    report = AdjointReport(trials, tol)
    for i in range(trials):
        v = random_vector(sig.domain, rng)
        w = random_vector(sig.codomain, rng)
        lhs = inner(apply(f, v), w)
        rhs = inner(v, apply(fa, w))
        defect = abs(lhs - rhs)
        report.max_defect = max(report.max_defect, defect)
        if defect > tol * (1.0 + abs(lhs)):
            report.failures.append((i, lhs, rhs))
    return report


def gradient_of_covector(f: LinTerm) -> Vector:
    """The Riesz representative of a covector: ``adj f (1)``."""
    sig = infer_types(f)
    if not same_space(sig.codomain, R):
        raise TermTypeError(f"covector must land in R, got {sig.codomain!r}")
    return apply(adjoint(f), VScalar(1.0))
