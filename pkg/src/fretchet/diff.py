"""Affine interpretation: value plus symbolic derivative in one pass.

:func:`affine` returns ``(f(v), f'(v))`` with the derivative as a linear
term (forward mode); :func:`affine_adj` returns ``(f(v), adj f'(v))``
directly (reverse mode).  The bilinear rule stores the evaluated operands
``u`` and ``v`` once and lets both sections reference them, which keeps
derivative terms linear in the size of the input term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adjoint import adjoint
from .errors import TermTypeError
from .funterm import (
    FBilin,
    FComp,
    FConst,
    FLin,
    FPar,
    FPow,
    FPrim,
    FunTerm,
    pair_parts,
)
from .linterm import (
    Comp,
    Inj,
    LinTerm,
    ParMap,
    PlusMap,
    Proj,
    ZeroMap,
    annotate,
    apply,
    infer_types,
)
from .spaces import R, VMap, VScalar, VTuple, Vector, components, same_space, scalar_value, shape


@dataclass(frozen=True)
class AffineResult:
    value: Vector
    deriv: LinTerm


@dataclass(frozen=True)
class AdjointAffineResult:
    value: Vector
    adj_deriv: LinTerm


def _collect(items, index):
    if index is None:
        return VTuple(items)
    return VMap(index, items, shape(items[0]) if items else None)


def affine(t: FunTerm, v: Vector) -> AffineResult:
    if isinstance(t, FConst):
        return AffineResult(t.w, ZeroMap(shape(v), shape(t.w)))
    if isinstance(t, FPrim):
        x = scalar_value(v)
        return AffineResult(VScalar(t.p.value(x)), t.p.deriv_at(x))
    if isinstance(t, FLin):
        h = annotate(t.h, shape(v))
        return AffineResult(apply(h, v), h)
    if isinstance(t, FBilin):
        u, w = pair_parts(v)
        s = shape(v)
        d = PlusMap(
            Comp(t.b.section_left(u, shape(w)), Proj(2, s)),
            Comp(t.b.section_right(w, shape(u)), Proj(1, s)),
        )
        return AffineResult(t.b.apply2(u, w), d)
    if isinstance(t, FComp):
        inner = affine(t.f, v)
        outer = affine(t.g, inner.value)
        return AffineResult(outer.value, Comp(outer.deriv, inner.deriv))
    if isinstance(t, FPar):
        comps = components(v)
        if len(comps) != len(t.parts):
            raise TermTypeError(f"par of {len(t.parts)} parts applied to {len(comps)} components")
        results = [affine(p, c) for p, c in zip(t.parts, comps)]
        value = _collect([r.value for r in results], t.index)
        return AffineResult(value, ParMap(tuple(r.deriv for r in results), t.index))
    if isinstance(t, FPow):
        results = [affine(t.f, c) for c in components(v)]
        value = VMap(t.index, [r.value for r in results], shape(results[0].value) if results else None)
        return AffineResult(value, ParMap(tuple(r.deriv for r in results), t.index))
    raise TermTypeError(f"not a function term: {t!r}")


def affine_adj(t: FunTerm, v: Vector) -> AdjointAffineResult:
    if isinstance(t, FConst):
        return AdjointAffineResult(t.w, ZeroMap(shape(t.w), shape(v)))
    if isinstance(t, FPrim):
        x = scalar_value(v)
        return AdjointAffineResult(VScalar(t.p.value(x)), t.p.deriv_at(x))
    if isinstance(t, FLin):
        h = annotate(t.h, shape(v))
        return AdjointAffineResult(apply(h, v), adjoint(h))
    if isinstance(t, FBilin):
        u, w = pair_parts(v)
        s = shape(v)
        d = PlusMap(
            Comp(Inj(2, space=s), adjoint(t.b.section_left(u, shape(w)))),
            Comp(Inj(1, space=s), adjoint(t.b.section_right(w, shape(u)))),
        )
        return AdjointAffineResult(t.b.apply2(u, w), d)
    if isinstance(t, FComp):
        inner = affine_adj(t.f, v)
        outer = affine_adj(t.g, inner.value)
        return AdjointAffineResult(outer.value, Comp(inner.adj_deriv, outer.adj_deriv))
    if isinstance(t, FPar):
        comps = components(v)
        if len(comps) != len(t.parts):
            raise TermTypeError(f"par of {len(t.parts)} parts applied to {len(comps)} components")
        results = [affine_adj(p, c) for p, c in zip(t.parts, comps)]
        value = _collect([r.value for r in results], t.index)
        return AdjointAffineResult(value, ParMap(tuple(r.adj_deriv for r in results), t.index))
    if isinstance(t, FPow):
        results = [affine_adj(t.f, c) for c in components(v)]
        value = VMap(t.index, [r.value for r in results], shape(results[0].value) if results else None)
        return AdjointAffineResult(value, ParMap(tuple(r.adj_deriv for r in results), t.index))
    raise TermTypeError(f"not a function term: {t!r}")


def jvp(t: FunTerm, v: Vector, dv: Vector) -> Vector:
    return apply(affine(t, v).deriv, dv)


def vjp(t: FunTerm, v: Vector, dy: Vector) -> Vector:
    return apply(affine_adj(t, v).adj_deriv, dy)


def gradient(t: FunTerm, v: Vector) -> Vector:
    """``∇f(v) = adj(f'(v))(1)`` for scalar-valued ``t``."""
    res = affine_adj(t, v)
    if not same_space(shape(res.value), R):
        raise TermTypeError(f"gradient needs a scalar-valued function, got {shape(res.value)!r}")
    return apply(res.adj_deriv, VScalar(1.0))


def deriv_signature(t: FunTerm, v: Vector):
    return infer_types(affine(t, v).deriv)
