"""Analytic functions in combinatory (point-free) form.

A function term is built from constants, scalar primitives, linear terms,
named bilinear operators, sequential composition and parallel composition.
There are no variables: every subterm is a closed function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ShapeError, TermTypeError
from .linterm import (
    Comp,
    ContractL,
    ContractR,
    LinTerm,
    ParMap,
    ScaleMap,
    Unitary,
    apply,
    dup,
    infer_types,
    minus,
    plus,
    rep,
    term_size,
)
from .linterm import _apply_unitary
from .spaces import (
    R,
    IndexSet,
    Pow,
    Scalar,
    Seg,
    SpaceTerm,
    TensorSpace,
    TupleSpace,
    VMap,
    VScalar,
    VTensor,
    VTuple,
    VZero,
    Vector,
    canon,
    components,
    contract,
    inner,
    is_sum,
    same_space,
    scalar_value,
    shape,
    sum_index,
    sum_vector,
    summands,
    tensor,
    tensor_terms,
    vec_add,
    vec_scale,
)
from .counting import tally

# ---------------------------------------------------------------------------
# Primitives
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimOp:
    """A scalar primitive with its derivative.  ``k`` is the exponent of
    ``pow``."""

    name: str
    k: int | None = None

    def __post_init__(self):
        if self.name not in _PRIMS:
            raise ValueError(f"unknown primitive {self.name!r}")
        if self.name == "pow" and (not isinstance(self.k, int) or self.k == 0):
            raise ValueError("pow needs a nonzero integer exponent")

    def value(self, x: float) -> float:
        return _guard(self, x, _PRIMS[self.name][0])

    def slope(self, x: float) -> float:
        return _guard(self, x, _PRIMS[self.name][1])

    def deriv_at(self, x: float) -> ScaleMap:
        return ScaleMap(self.slope(x), R)


def _guard(p, x, fn):
    if p.name == "ln" and x <= 0.0:
        raise DomainError(f"ln is undefined at {x!r}")
    if p.name == "pow" and p.k < 0 and x == 0.0:
        raise DomainError(f"pow {p.k} is undefined at 0")
    try:
        return fn(x, p.k)
    except (OverflowError, ValueError, ZeroDivisionError) as e:
        raise DomainError(f"{p.name} at {x!r}: {e}") from None


_PRIMS = {
    "sin": (lambda x, k: math.sin(x), lambda x, k: math.cos(x)),
    "cos": (lambda x, k: math.cos(x), lambda x, k: -math.sin(x)),
    "exp": (lambda x, k: math.exp(x), lambda x, k: math.exp(x)),
    "ln": (lambda x, k: math.log(x), lambda x, k: 1.0 / x),
    "tanh": (lambda x, k: math.tanh(x), lambda x, k: 1.0 - math.tanh(x) ** 2),
    "pow": (lambda x, k: x**k, lambda x, k: k * x ** (k - 1)),
}
PRIM_NAMES = tuple(_PRIMS)


# ---------------------------------------------------------------------------
# Bilinear operators
# ---------------------------------------------------------------------------

BILINEAR_NAMES = ("contract", "tensor", "dot", "mul", "matvec", "hadamard")


@dataclass(frozen=True)
class BilinOp:
    """Named bilinear operator on a pair ``(u, v)``.

    ``contract`` is ``∗``, ``tensor`` is ``⊗``, ``dot`` is ``⊙``, ``mul`` is
    scalar-times-vector, ``matvec`` is ``⋆`` (a matrix is a tensor in
    ``A ⊗ B``), ``hadamard`` is the elementwise product.
    """

    name: str

    def __post_init__(self):
        if self.name not in BILINEAR_NAMES:
            raise ValueError(f"unknown bilinear operator {self.name!r}")

    def codomain(self, a: SpaceTerm, b: SpaceTerm) -> SpaceTerm:
        n = self.name
        if n == "contract":
            if not (isinstance(a, TensorSpace) and isinstance(b, TensorSpace)):
                raise TermTypeError(f"contract needs two tensor spaces, got {a!r}, {b!r}")
            if not same_space(a.right, b.left):
                raise TermTypeError(f"contract mismatch {a.right!r} vs {b.left!r}")
            return TensorSpace(a.left, b.right)
        if n == "tensor":
            return TensorSpace(a, b)
        if n == "dot":
            if not same_space(a, b):
                raise TermTypeError(f"dot of {a!r} and {b!r}")
            return R
        if n == "mul":
            if not isinstance(a, Scalar):
                raise TermTypeError(f"mul needs a scalar on the left, got {a!r}")
            return b
        if n == "matvec":
            if not isinstance(a, TensorSpace) or not same_space(a.right, b):
                raise TermTypeError(f"matvec of {a!r} and {b!r}")
            return a.left
        if not same_space(a, b) or _has_tensor(a):
            raise TermTypeError(f"hadamard of {a!r} and {b!r}")
        return a

    def apply2(self, u: Vector, v: Vector) -> Vector:
        n = self.name
        if n == "contract":
            return contract(u, v)
        if n == "tensor":
            return tensor(u, v)
        if n == "dot":
            return VScalar(inner(u, v))
        if n == "mul":
            return vec_scale(scalar_value(u), v)
        if n == "matvec":
            sm = shape(u)
            if not isinstance(sm, TensorSpace):
                raise ShapeError(f"matvec needs a tensor on the left, got {sm!r}")
            acc = VZero(sm.left)
            for c, a, b in tensor_terms(u):
                tally()
                acc = vec_add(acc, vec_scale(c * inner(b, v), a))
            return acc
        return _hadamard(u, v)

    def section_left(self, u: Vector, other: SpaceTerm) -> LinTerm:
        """``(u ⋄) : V ⊸ W`` where ``other`` is ``V``."""
        n = self.name
        if n == "contract":
            if not isinstance(other, TensorSpace):
                raise TermTypeError(f"contract section needs a tensor space, got {other!r}")
            return ContractL(u, other.right)
        if n == "tensor":
            return Comp(ContractL(tensor(u, VScalar(1.0)), other), Unitary("bra", other))
        if n == "dot":
            return Comp(
                Unitary("ibra", TensorSpace(R, R)),
                Comp(ContractL(tensor(VScalar(1.0), u), R), Unitary("ket", other)),
            )
        if n == "mul":
            return ScaleMap(scalar_value(u), other)
        if n == "matvec":
            sm = shape(u)
            return Comp(
                Unitary("iket", TensorSpace(sm.left, R)),
                Comp(ContractL(u, R), Unitary("ket", other)),
            )
        return _hadamard_section(u)

    def section_right(self, v: Vector, other: SpaceTerm) -> LinTerm:
        """``(⋄ v) : U ⊸ W`` where ``other`` is ``U``."""
        n = self.name
        if n == "contract":
            if not isinstance(other, TensorSpace):
                raise TermTypeError(f"contract section needs a tensor space, got {other!r}")
            return ContractR(v, other.left)
        if n == "tensor":
            return Comp(ContractR(tensor(VScalar(1.0), v), other), Unitary("ket", other))
        if n == "dot":
            return Comp(
                Unitary("iket", TensorSpace(R, R)),
                Comp(ContractR(tensor(v, VScalar(1.0)), R), Unitary("bra", other)),
            )
        if n == "mul":
            sv = shape(v)
            return Comp(
                Unitary("iket", TensorSpace(sv, R)),
                Comp(ContractL(tensor(v, VScalar(1.0)), R), Unitary("bra", R)),
            )
        if n == "matvec":
            if not isinstance(other, TensorSpace):
                raise TermTypeError(f"matvec section needs a tensor space, got {other!r}")
            return Comp(
                Unitary("iket", TensorSpace(other.left, R)),
                ContractR(tensor(v, VScalar(1.0)), other.left),
            )
        return _hadamard_section(v)


def _has_tensor(s):
    if isinstance(s, TensorSpace):
        return True
    if is_sum(s):
        return any(_has_tensor(c) for c in summands(s))
    return False


def _hadamard(u, v):
    if isinstance(u, VZero) or isinstance(v, VZero):
        return VZero(shape(u))
    if isinstance(u, VScalar):
        tally()
        return VScalar(u.value * scalar_value(v))
    if isinstance(u, (VTuple, VMap)):
        return sum_vector(shape(u), [_hadamard(a, b) for a, b in zip(components(u), components(v))])
    raise ShapeError(f"hadamard is not defined on {shape(u)!r}")


def _hadamard_section(u):
    if isinstance(u, VScalar):
        return ScaleMap(u.value, R)
    if isinstance(u, VZero) and isinstance(u.space, Scalar):
        return ScaleMap(0.0, R)
    s = shape(u)
    if is_sum(s):
        parts = tuple(_hadamard_section(c) for c in components(u))
        return ParMap(parts, s.index if isinstance(s, Pow) else None)
    raise TermTypeError(f"hadamard is not defined on {s!r}")


def reduce_to_contraction(op: BilinOp, u: Vector, v: Vector) -> Vector:
    """Evaluate ``u ⋄ v`` using only ``∗`` and unitaries; a cross-check for
    :meth:`BilinOp.apply2`."""
    one = VScalar(1.0)
    n = op.name
    if n == "contract":
        return contract(u, v)
    if n == "tensor":
        return contract(_apply_unitary("ket", u), _apply_unitary("bra", v))
    if n == "dot":
        return _apply_unitary("ibra", contract(_apply_unitary("bra", u), _apply_unitary("ket", v)))
    if n == "mul":
        return _apply_unitary("iket", contract(_apply_unitary("ket", v), _apply_unitary("bra", u)))
    if n == "matvec":
        return _apply_unitary("iket", contract(u, _apply_unitary("ket", v)))
    # elementwise product = diag(u) ⋆ v with diag(u) = Σ u_i (e_i ⊗ e_i)
    from .spaces import basis, dim, to_coords

    s = shape(u)
    cu = to_coords(u)
    diag = VTensor(
        TensorSpace(s, s),
        tuple((float(cu[i]), basis(s, i), basis(s, i)) for i in range(dim(s))),
    )
    out = _apply_unitary("iket", contract(diag, _apply_unitary("ket", v)))
    return out if dim(s) else VZero(s)


# ---------------------------------------------------------------------------
# Function terms
# ---------------------------------------------------------------------------


class FunTerm:
    pass


@dataclass(frozen=True)
class FConst(FunTerm):
    w: Vector


@dataclass(frozen=True)
class FPrim(FunTerm):
    p: PrimOp


@dataclass(frozen=True)
class FLin(FunTerm):
    h: LinTerm


@dataclass(frozen=True)
class FBilin(FunTerm):
    b: BilinOp


@dataclass(frozen=True)
class FComp(FunTerm):
    """``g ∘ f``: apply ``f`` first."""

    g: FunTerm
    f: FunTerm


@dataclass(frozen=True)
class FPar(FunTerm):
    parts: tuple
    index: IndexSet | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class FPow(FunTerm):
    index: IndexSet
    f: FunTerm


def prim(name: str, k: int | None = None) -> FPrim:
    return FPrim(PrimOp(name, k))


def bilin(name: str) -> FBilin:
    return FBilin(BilinOp(name))


def pair_parts(v: Vector) -> tuple:
    parts = components(v)
    if len(parts) != 2:
        raise ShapeError(f"bilinear operator needs a pair, got {len(parts)} components")
    return parts


def eval_fun(t: FunTerm, v: Vector) -> Vector:
    if isinstance(t, FConst):
        return t.w
    if isinstance(t, FPrim):
        return VScalar(t.p.value(scalar_value(v)))
    if isinstance(t, FLin):
        return apply(t.h, v)
    if isinstance(t, FBilin):
        u, w = pair_parts(v)
        return t.b.apply2(u, w)
    if isinstance(t, FComp):
        return eval_fun(t.g, eval_fun(t.f, v))
    if isinstance(t, FPar):
        comps = components(v)
        if len(comps) != len(t.parts):
            raise ShapeError(f"par of {len(t.parts)} parts applied to {len(comps)} components")
        out = [eval_fun(p, c) for p, c in zip(t.parts, comps)]
        return _collect(out, t.index)
    if isinstance(t, FPow):
        out = [eval_fun(t.f, c) for c in components(v)]
        return VMap(t.index, out, shape(out[0]) if out else None)
    raise TermTypeError(f"not a function term: {t!r}")


def _collect(items, index):
    if index is None:
        return VTuple(items)
    return VMap(index, items, shape(items[0]) if items else None)


def fun_codomain(t: FunTerm, dom: SpaceTerm) -> SpaceTerm:
    """Forward type inference from a known domain."""
    if isinstance(t, FConst):
        return shape(t.w)
    if isinstance(t, FPrim):
        if not isinstance(canon(dom), Scalar):
            raise TermTypeError(f"{t.p.name} needs a scalar, got {dom!r}")
        return R
    if isinstance(t, FLin):
        return infer_types(t.h, dom).codomain
    if isinstance(t, FBilin):
        if not is_sum(dom) or len(summands(dom)) != 2:
            raise TermTypeError(f"{t.b.name} needs a pair, got {dom!r}")
        a, b = summands(dom)
        return t.b.codomain(a, b)
    if isinstance(t, FComp):
        return fun_codomain(t.g, fun_codomain(t.f, dom))
    if isinstance(t, FPar):
        if not is_sum(dom) or len(summands(dom)) != len(t.parts):
            raise TermTypeError(f"par of {len(t.parts)} parts cannot take {dom!r}")
        cods = [fun_codomain(p, s) for p, s in zip(t.parts, summands(dom))]
        if t.index is None:
            return TupleSpace(tuple(cods))
        if any(not same_space(c, cods[0]) for c in cods):
            raise TermTypeError("par over an index set needs a common codomain")
        return Pow(t.index, cods[0])
    if isinstance(t, FPow):
        cd = canon(dom)
        if not (isinstance(cd, Pow) and cd.index == t.index):
            raise TermTypeError(f"pow over {t.index!r} cannot take {dom!r}")
        return Pow(t.index, fun_codomain(t.f, cd.body))
    raise TermTypeError(f"not a function term: {t!r}")


# ---------------------------------------------------------------------------
# Point-free sugar (plain terms, no new evaluator cases)
# ---------------------------------------------------------------------------


def fanout(*parts: FunTerm) -> FunTerm:
    """``⟨f_1, ..., f_n⟩ = (f_1 × ... × f_n) ∘ rep_n``."""
    return FComp(FPar(parts), FLin(rep(Seg(len(parts)))))


def fadd(f: FunTerm, g: FunTerm) -> FunTerm:
    return FComp(FLin(plus()), FComp(FPar((f, g)), FLin(dup())))


def fsub(f: FunTerm, g: FunTerm) -> FunTerm:
    return FComp(FLin(minus()), FComp(FPar((f, g)), FLin(dup())))


def fmul(f: FunTerm, g: FunTerm) -> FunTerm:
    return FComp(bilin("mul"), FComp(FPar((f, g)), FLin(dup())))


def sections(b: BilinOp, side: str, u: Vector, other: SpaceTerm) -> LinTerm:
    if side in ("L", "l", "left"):
        return b.section_left(u, other)
    if side in ("R", "r", "right"):
        return b.section_right(u, other)
    raise ValueError(f"side must be L or R, got {side!r}")


def fun_size(t: FunTerm) -> int:
    if isinstance(t, FConst):
        return 2
    if isinstance(t, FLin):
        return 1 + term_size(t.h)
    if isinstance(t, FComp):
        return 1 + fun_size(t.g) + fun_size(t.f)
    if isinstance(t, FPar):
        return 1 + sum(fun_size(p) for p in t.parts)
    if isinstance(t, FPow):
        return 1 + fun_size(t.f)
    return 1
