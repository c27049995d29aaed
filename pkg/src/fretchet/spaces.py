"""Index sets, Hilbert-space terms and concrete vectors.

Index sets are built from initial segments ``Seg(n) = {1..n}``, products and
disjoint sums.  Spaces are the zero space, the scalar field, direct sums
(``TupleSpace`` for inhomogeneous families, ``Pow`` for copowers) and
tensor products.  A tuple space whose components are all the same space
``V`` *is* the copower ``Pow(Seg(n), V)``; :func:`canon` makes that
identification explicit and every shape comparison goes through it.

Tensor elements are kept as unnormalized formal sums of scaled pure tensors
``(coeff, left, right)``.  Equality of vectors is semantic: compare
:func:`to_coords`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product as _cartesian
from typing import Any, Sequence

import numpy as np

from .counting import coeff_mul, tally
from .errors import DimError, ShapeError

# ---------------------------------------------------------------------------
# Index sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Inl:
    value: Any


@dataclass(frozen=True)
class Inr:
    value: Any


class IndexSet:
    def card(self) -> int:
        return len(self.elements)

    @cached_property
    def elements(self) -> tuple:
        return tuple(self._enumerate())

    @cached_property
    def _positions(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    def position(self, x) -> int:
        try:
            return self._positions[x]
        except (KeyError, TypeError):
            raise DimError(f"{x!r} is not an element of {self!r}") from None

    def __contains__(self, x) -> bool:
        try:
            return x in self._positions
        except TypeError:
            return False


@dataclass(frozen=True)
class Seg(IndexSet):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("Seg(n) needs n >= 0")

    def card(self):
        return self.n

    def _enumerate(self):
        return range(1, self.n + 1)


@dataclass(frozen=True)
class Prod(IndexSet):
    left: IndexSet
    right: IndexSet

    def card(self):
        return self.left.card() * self.right.card()

    def _enumerate(self):
        return _cartesian(self.left.elements, self.right.elements)


@dataclass(frozen=True)
class DisjSum(IndexSet):
    left: IndexSet
    right: IndexSet

    def card(self):
        return self.left.card() + self.right.card()

    def _enumerate(self):
        yield from (Inl(x) for x in self.left.elements)
        yield from (Inr(y) for y in self.right.elements)


def card(X: IndexSet) -> int:
    return X.card()


def enumerate_index(X: IndexSet) -> tuple:
    """Elements of ``X`` in the fixed order: ascending segments, row-major
    products, left summand before right summand."""
    return X.elements


# ---------------------------------------------------------------------------
# Spaces
# ---------------------------------------------------------------------------


class SpaceTerm:
    pass


@dataclass(frozen=True)
class ZeroSpace(SpaceTerm):
    pass


@dataclass(frozen=True)
class Scalar(SpaceTerm):
    pass


@dataclass(frozen=True)
class TupleSpace(SpaceTerm):
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))


@dataclass(frozen=True)
class Pow(SpaceTerm):
    index: IndexSet
    body: SpaceTerm


@dataclass(frozen=True)
class TensorSpace(SpaceTerm):
    left: SpaceTerm
    right: SpaceTerm


R = Scalar()


def real_vector_space(n: int) -> Pow:
    """``∏^⟨n⟩ ℝ``."""
    return Pow(Seg(n), R)


def dim(V: SpaceTerm) -> int:
    if isinstance(V, ZeroSpace):
        return 0
    if isinstance(V, Scalar):
        return 1
    if isinstance(V, TupleSpace):
        return sum(dim(c) for c in V.components)
    if isinstance(V, Pow):
        return V.index.card() * dim(V.body)
    if isinstance(V, TensorSpace):
        return dim(V.left) * dim(V.right)
    raise TypeError(f"not a space: {V!r}")


@lru_cache(maxsize=4096)
def canon(V: SpaceTerm) -> SpaceTerm:
    """Normal form used for shape comparison: homogeneous tuples become
    copowers over a segment."""
    if isinstance(V, TupleSpace):
        comps = tuple(canon(c) for c in V.components)
        if comps and all(c == comps[0] for c in comps):
            return Pow(Seg(len(comps)), comps[0])
        return TupleSpace(comps)
    if isinstance(V, Pow):
        return Pow(V.index, canon(V.body))
    if isinstance(V, TensorSpace):
        return TensorSpace(canon(V.left), canon(V.right))
    return V


def same_space(a: SpaceTerm, b: SpaceTerm) -> bool:
    return a == b or canon(a) == canon(b)


def is_sum(V: SpaceTerm) -> bool:
    return isinstance(V, (TupleSpace, Pow))


def sum_index(V: SpaceTerm) -> IndexSet:
    if isinstance(V, TupleSpace):
        return Seg(len(V.components))
    if isinstance(V, Pow):
        return V.index
    raise ShapeError(f"not a direct sum: {V!r}")


def summand(V: SpaceTerm, x) -> SpaceTerm:
    """The component space ``V_x`` of a direct sum."""
    if isinstance(V, TupleSpace):
        if not isinstance(x, int) or not 1 <= x <= len(V.components):
            raise DimError(f"no component {x!r} in {V!r}")
        return V.components[x - 1]
    if isinstance(V, Pow):
        V.index.position(x)
        return V.body
    raise ShapeError(f"not a direct sum: {V!r}")


def summands(V: SpaceTerm) -> tuple:
    if isinstance(V, TupleSpace):
        return V.components
    if isinstance(V, Pow):
        return (V.body,) * V.index.card()
    raise ShapeError(f"not a direct sum: {V!r}")


# ---------------------------------------------------------------------------
# Vectors
# ---------------------------------------------------------------------------


class Vector:
    pass


@dataclass(frozen=True)
class VZero(Vector):
    space: SpaceTerm


@dataclass(frozen=True)
class VScalar(Vector):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True)
class VTuple(Vector):
    items: tuple

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class VMap(Vector):
    """Element of ``Pow(index, body)``; ``items`` follow enumerate order.

    ``body`` is only needed when the index set is empty.
    """

    index: IndexSet
    items: tuple
    body: SpaceTerm | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if len(self.items) != self.index.card():
            raise ShapeError(
                f"copower over {self.index!r} needs {self.index.card()} items, got {len(self.items)}"
            )


@dataclass(frozen=True)
class VTensor(Vector):
    space: TensorSpace
    terms: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((float(c), u, w) for c, u, w in self.terms)
        )


def scalar(x) -> VScalar:
    return VScalar(x)


def vec(*xs) -> VMap:
    """A vector of ``∏^⟨n⟩ ℝ`` from plain numbers."""
    return VMap(Seg(len(xs)), tuple(VScalar(x) for x in xs), R)


def tensor(u: Vector, w: Vector, coeff: float = 1.0) -> VTensor:
    """The pure tensor ``coeff·(u ⊗ w)``."""
    return VTensor(TensorSpace(shape(u), shape(w)), ((coeff, u, w),))


def shape(v: Vector) -> SpaceTerm:
    if isinstance(v, VScalar):
        return R
    if isinstance(v, VZero):
        return v.space
    if isinstance(v, VTensor):
        return v.space
    if not isinstance(v, (VTuple, VMap)):
        raise ShapeError(f"not a vector: {v!r}")
    # Composite shapes are cached on the (immutable) vector.
    cached = v.__dict__.get("_shape")
    if cached is None:
        cached = _composite_shape(v)
        object.__setattr__(v, "_shape", cached)
    return cached


def _composite_shape(v):
    if isinstance(v, VTuple):
        return TupleSpace(tuple(shape(x) for x in v.items))
    if isinstance(v, VMap):
        if v.items:
            return Pow(v.index, shape(v.items[0]))
        if v.body is None:
            raise ShapeError("empty copower vector without a body space")
        return Pow(v.index, v.body)
    raise ShapeError(f"not a vector: {v!r}")


def check_shape(v: Vector, V: SpaceTerm, what="vector"):
    actual = shape(v)
    if not same_space(actual, V):
        raise ShapeError(f"{what} has shape {actual!r}, expected {V!r}")


def validate(v: Vector) -> SpaceTerm:
    """Deep shape check; returns the shape."""
    if isinstance(v, VMap):
        body = v.body if v.body is not None else (shape(v.items[0]) if v.items else None)
        for item in v.items:
            check_shape(item, body, "copower item")
            validate(item)
    elif isinstance(v, VTuple):
        for item in v.items:
            validate(item)
    elif isinstance(v, VTensor):
        if not isinstance(v.space, TensorSpace):
            raise ShapeError("tensor vector needs a TensorSpace")
        for _, a, b in v.terms:
            check_shape(a, v.space.left, "left tensor factor")
            check_shape(b, v.space.right, "right tensor factor")
            validate(a)
            validate(b)
    return shape(v)


def sum_vector(space: SpaceTerm, items: Sequence[Vector]) -> Vector:
    """Build an element of the direct sum ``space`` from its components."""
    if isinstance(space, Pow):
        return VMap(space.index, tuple(items), space.body)
    if isinstance(space, TupleSpace):
        return VTuple(tuple(items))
    raise ShapeError(f"not a direct sum: {space!r}")


def components(v: Vector) -> tuple:
    """Components of a direct-sum element (zero vectors are expanded)."""
    if isinstance(v, (VTuple, VMap)):
        return v.items
    if isinstance(v, VZero) and is_sum(v.space):
        return tuple(VZero(s) for s in summands(v.space))
    raise ShapeError(f"not a direct-sum vector: {v!r}")


def component(v: Vector, x) -> Vector:
    if isinstance(v, VTuple):
        if not isinstance(x, int) or not 1 <= x <= len(v.items):
            raise DimError(f"no component {x!r} in a {len(v.items)}-tuple")
        return v.items[x - 1]
    if isinstance(v, VMap):
        return v.items[v.index.position(x)]
    if isinstance(v, VZero):
        return VZero(summand(v.space, x))
    raise ShapeError(f"not a direct-sum vector: {v!r}")


def tensor_terms(v: Vector) -> tuple:
    if isinstance(v, VTensor):
        return v.terms
    if isinstance(v, VZero) and isinstance(v.space, TensorSpace):
        return ()
    raise ShapeError(f"not a tensor vector: {v!r}")


def scalar_value(v: Vector) -> float:
    if isinstance(v, VScalar):
        return v.value
    if isinstance(v, VZero) and isinstance(v.space, Scalar):
        return 0.0
    raise ShapeError(f"not a scalar: {v!r}")


# ---------------------------------------------------------------------------
# Vector-space structure
# ---------------------------------------------------------------------------


def vec_zero(V: SpaceTerm) -> Vector:
    return VZero(V)


def _materialize_zero(V: SpaceTerm) -> Vector:
    if isinstance(V, Scalar):
        return VScalar(0.0)
    if isinstance(V, TensorSpace):
        return VTensor(V, ())
    if is_sum(V):
        return sum_vector(V, [VZero(s) for s in summands(V)])
    return VZero(V)


def vec_add(v: Vector, w: Vector) -> Vector:
    sv, sw = shape(v), shape(w)
    if not same_space(sv, sw):
        raise ShapeError(f"cannot add {sv!r} and {sw!r}")
    return _add(v, w)


def _add(v, w):
    if isinstance(v, VZero):
        return w
    if isinstance(w, VZero):
        return v
    if isinstance(v, VScalar):
        return VScalar(v.value + w.value)
    if isinstance(v, VTensor):
        return VTensor(v.space, v.terms + tensor_terms(w))
    if isinstance(v, (VTuple, VMap)):
        items = tuple(_add(a, b) for a, b in zip(components(v), components(w)))
        return sum_vector(shape(v), items)
    raise ShapeError(f"cannot add {v!r}")


def vec_scale(k: float, v: Vector) -> Vector:
    """``k·v``; tensors scale their term coefficients (one product per term)."""
    k = float(k)
    if isinstance(v, VZero):
        return v
    if isinstance(v, VScalar):
        tally()
        return VScalar(k * v.value)
    if isinstance(v, VTensor):
        return VTensor(v.space, tuple((coeff_mul(k, c), a, b) for c, a, b in v.terms))
    if isinstance(v, (VTuple, VMap)):
        return sum_vector(shape(v), [vec_scale(k, x) for x in components(v)])
    raise ShapeError(f"cannot scale {v!r}")


def vec_neg(v: Vector) -> Vector:
    return vec_scale(-1.0, v)


def vec_sub(v: Vector, w: Vector) -> Vector:
    return vec_add(v, vec_neg(w))


def inner(v: Vector, w: Vector) -> float:
    sv, sw = shape(v), shape(w)
    if not same_space(sv, sw):
        raise ShapeError(f"inner product of {sv!r} and {sw!r}")
    return _inner(v, w)


def _inner(v, w):
    if isinstance(v, VZero) or isinstance(w, VZero):
        return 0.0
    if isinstance(v, VScalar):
        tally()
        return v.value * w.value
    if isinstance(v, VTensor):
        total = 0.0
        for c1, a1, b1 in v.terms:
            for c2, a2, b2 in w.terms:
                factor = _inner(a1, a2) * _inner(b1, b2)
                tally()
                total += coeff_mul(coeff_mul(c1, c2), factor)
        return total
    return math.fsum(_inner(a, b) for a, b in zip(components(v), components(w)))


def norm(v: Vector) -> float:
    return math.sqrt(max(inner(v, v), 0.0))


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------


def to_coords(v: Vector) -> np.ndarray:
    """Coordinates in the orthonormal basis; tensor coordinates are
    Kronecker-ordered (left index major)."""
    if isinstance(v, VZero):
        return np.zeros(dim(v.space))
    if isinstance(v, VScalar):
        return np.array([v.value])
    if isinstance(v, VTensor):
        out = np.zeros(dim(v.space))
        for c, a, b in v.terms:
            out += c * np.kron(to_coords(a), to_coords(b))
        return out
    if isinstance(v, (VTuple, VMap)):
        parts = [to_coords(x) for x in v.items]
        return np.concatenate(parts) if parts else np.zeros(0)
    raise ShapeError(f"not a vector: {v!r}")


def from_coords(V: SpaceTerm, c) -> Vector:
    c = np.asarray(c, dtype=float).ravel()
    if c.shape[0] != dim(V):
        raise DimError(f"{V!r} has dimension {dim(V)}, got {c.shape[0]} coordinates")
    return _from_coords(V, c)


def _from_coords(V, c):
    if isinstance(V, ZeroSpace):
        return VZero(V)
    if isinstance(V, Scalar):
        return VScalar(c[0])
    if isinstance(V, TensorSpace):
        m, n = dim(V.left), dim(V.right)
        mat = c.reshape(m, n)
        terms = tuple(
            (1.0, _from_coords(V.left, mat[:, j]), basis(V.right, j)) for j in range(n)
        )
        return VTensor(V, terms)
    items, offset = [], 0
    for s in summands(V):
        d = dim(s)
        items.append(_from_coords(s, c[offset : offset + d]))
        offset += d
    return sum_vector(V, items)


def basis(V: SpaceTerm, i: int) -> Vector:
    d = dim(V)
    if not 0 <= i < d:
        raise DimError(f"basis index {i} out of range for dimension {d}")
    if isinstance(V, Scalar):
        return VScalar(1.0)
    if isinstance(V, TensorSpace):
        n = dim(V.right)
        return tensor(basis(V.left, i // n), basis(V.right, i % n))
    items, offset = [], 0
    for s in summands(V):
        ds = dim(s)
        if offset <= i < offset + ds:
            items.append(basis(s, i - offset))
        else:
            items.append(VZero(s))
        offset += ds
    return sum_vector(V, items)


def compact(v: Vector) -> Vector:
    """Re-express ``v`` in coordinate form; collapses long tensor sums."""
    return from_coords(shape(v), to_coords(v))


def vectors_close(v: Vector, w: Vector, tol: float = 1e-12) -> bool:
    if not same_space(shape(v), shape(w)):
        return False
    return bool(np.all(np.abs(to_coords(v) - to_coords(w)) <= tol))


def transpose_tensor(v: Vector) -> Vector:
    """Swap the factors of every pure term: ``V ⊗ W → W ⊗ V``."""
    sp = shape(v)
    if not isinstance(sp, TensorSpace):
        raise ShapeError(f"transpose needs a tensor, got {sp!r}")
    flipped = TensorSpace(sp.right, sp.left)
    return VTensor(flipped, tuple((c, b, a) for c, a, b in tensor_terms(v)))


def random_vector(V: SpaceTerm, rng: np.random.Generator, max_terms: int = 3) -> Vector:
    if isinstance(V, ZeroSpace):
        return VZero(V)
    if isinstance(V, Scalar):
        return VScalar(rng.uniform(-1.0, 1.0))
    if isinstance(V, TensorSpace):
        n_terms = int(rng.integers(1, max_terms + 1))
        terms = tuple(
            (
                float(rng.uniform(-1.0, 1.0)),
                random_vector(V.left, rng, max_terms),
                random_vector(V.right, rng, max_terms),
            )
            for _ in range(n_terms)
        )
        return VTensor(V, terms)
    return sum_vector(V, [random_vector(s, rng, max_terms) for s in summands(V)])


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """A finite relation ``R ⊆ domain × codomain``; pairs are deduplicated
    and sorted by enumerate order."""

    domain: IndexSet
    codomain: IndexSet
    pairs: tuple

    def __post_init__(self):
        for x, y in self.pairs:
            if x not in self.domain or y not in self.codomain:
                raise DimError(f"pair {(x, y)!r} outside {self.domain!r} x {self.codomain!r}")
        key = lambda p: (self.domain.position(p[0]), self.codomain.position(p[1]))
        object.__setattr__(self, "pairs", tuple(sorted(set(self.pairs), key=key)))

    def transpose(self) -> "Relation":
        return Relation(self.codomain, self.domain, tuple((y, x) for x, y in self.pairs))

    def then(self, other: "Relation") -> "Relation":
        """Relational composition: ``self`` first, then ``other``."""
        succ: dict = {}
        for y, z in other.pairs:
            succ.setdefault(y, []).append(z)
        out = {(x, z) for x, y in self.pairs for z in succ.get(y, ())}
        return Relation(self.domain, other.codomain, tuple(out))

    def path_counts(self, other: "Relation") -> dict:
        succ: dict = {}
        for y, z in other.pairs:
            succ.setdefault(y, []).append(z)
        counts: dict = {}
        for x, y in self.pairs:
            for z in succ.get(y, ()):
                counts[(x, z)] = counts.get((x, z), 0) + 1
        return counts


def full_relation(X: IndexSet, Y: IndexSet) -> Relation:
    return Relation(X, Y, tuple((x, y) for x in X.elements for y in Y.elements))


def contract(p: Vector, x: Vector) -> Vector:
    """Tensor contraction ``(w ⊗ v) ∗ (v' ⊗ u) = (v ⊙ v')·(w ⊗ u)``, extended
    bilinearly over both formal sums."""
    sp, sx = shape(p), shape(x)
    if not isinstance(sp, TensorSpace) or not isinstance(sx, TensorSpace):
        raise ShapeError(f"contraction needs two tensors, got {sp!r} and {sx!r}")
    if not same_space(sp.right, sx.left):
        raise ShapeError(f"contraction mismatch: {sp.right!r} against {sx.left!r}")
    out_space = TensorSpace(sp.left, sx.right)
    terms = []
    for c1, w, v in tensor_terms(p):
        for c2, v2, u in tensor_terms(x):
            terms.append((coeff_mul(coeff_mul(c1, c2), _inner(v, v2)), w, u))
    return VTensor(out_space, tuple(terms))
