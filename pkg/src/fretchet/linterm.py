"""Symbolic linear functions: the language derivatives and adjoints live in.

Terms are immutable dataclasses.  Polymorphic constructors (``Id``,
``ScaleMap``, ``Proj``, unitaries, ...) carry optional space annotations;
:func:`annotate` fills them in from a known domain and :func:`infer_types`
computes the unique signature of a sufficiently annotated term.
Evaluation (:func:`apply`) is value-driven and only consults annotations
where the input cannot tell it what to build (zero maps, injections).
"""

from __future__ import annotations

from dataclasses import dataclass

from .counting import coeff_mul
from .errors import MissingAnnotation, ShapeError, TermTypeError
from .spaces import (
    R,
    IndexSet,
    Pow,
    Relation,
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
    component,
    components,
    contract,
    full_relation,
    is_sum,
    same_space,
    scalar_value,
    shape,
    sum_index,
    sum_vector,
    summand,
    summands,
    tensor_terms,
    transpose_tensor,
    vec_add,
    vec_scale,
)

UNITARY_INVERSE = {
    "bra": "ibra",
    "ibra": "bra",
    "ket": "iket",
    "iket": "ket",
    "ttranspose": "ttranspose",
    "assoc": "assoc_inv",
    "assoc_inv": "assoc",
    "distrib": "distrib_inv",
    "distrib_inv": "distrib",
    "zip": "unzip",
    "unzip": "zip",
}
UNITARIES = tuple(UNITARY_INVERSE)


class LinTerm:
    pass


@dataclass(frozen=True)
class Id(LinTerm):
    space: SpaceTerm | None = None


@dataclass(frozen=True)
class ZeroMap(LinTerm):
    dom: SpaceTerm | None = None
    cod: SpaceTerm | None = None


@dataclass(frozen=True)
class Comp(LinTerm):
    """``g • f``: apply ``f`` first."""

    g: LinTerm
    f: LinTerm


@dataclass(frozen=True)
class ContractL(LinTerm):
    """``(v ∗) : V ⊗ U ⊸ W ⊗ U`` for ``v ∈ W ⊗ V``; ``u`` annotates ``U``."""

    v: Vector
    u: SpaceTerm | None = None


@dataclass(frozen=True)
class ContractR(LinTerm):
    """``(∗ w) : W ⊗ V ⊸ W ⊗ U`` for ``w ∈ V ⊗ U``; ``left`` annotates ``W``."""

    w: Vector
    left: SpaceTerm | None = None


@dataclass(frozen=True)
class ScaleMap(LinTerm):
    k: float
    space: SpaceTerm | None = None

    def __post_init__(self):
        object.__setattr__(self, "k", float(self.k))


@dataclass(frozen=True)
class Inj(LinTerm):
    """Injection of component ``y``.

    ``space`` is the full direct sum.  Alternatively ``index`` alone means
    the copower ``Pow(index, V)`` over the input space ``V``.
    """

    y: object
    index: IndexSet | None = None
    space: SpaceTerm | None = None


@dataclass(frozen=True)
class Proj(LinTerm):
    y: object
    space: SpaceTerm | None = None


@dataclass(frozen=True)
class ParMap(LinTerm):
    """Zipped apply ``Π_x f_x``.  Without ``index`` the family is positional
    (a tuple); with ``index`` the parts follow its enumerate order."""

    parts: tuple
    index: IndexSet | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class PowMap(LinTerm):
    index: IndexSet
    f: LinTerm


@dataclass(frozen=True)
class Fanout(LinTerm):
    parts: tuple
    index: IndexSet | None = None
    dom: SpaceTerm | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class PlusMap(LinTerm):
    f: LinTerm
    g: LinTerm


@dataclass(frozen=True)
class Red(LinTerm):
    rel: Relation
    body: SpaceTerm | None = None


@dataclass(frozen=True)
class Unitary(LinTerm):
    kind: str
    at: SpaceTerm | None = None

    def __post_init__(self):
        if self.kind not in UNITARY_INVERSE:
            raise ValueError(f"unknown unitary {self.kind!r}")


@dataclass(frozen=True)
class TypeSig:
    domain: SpaceTerm
    codomain: SpaceTerm


# ---------------------------------------------------------------------------
# Typing
# ---------------------------------------------------------------------------


def infer_types(f: LinTerm, dom: SpaceTerm | None = None) -> TypeSig:
    _, d, c = _elab(f, dom, None)
    return TypeSig(d, c)


def annotate(f: LinTerm, dom: SpaceTerm | None = None, cod: SpaceTerm | None = None) -> LinTerm:
    """Return ``f`` with every space annotation filled in."""
    term, _, _ = _elab(f, dom, cod)
    return term


def _need(x, what):
    if x is None:
        raise MissingAnnotation(f"cannot infer {what}; add an annotation")
    return x


def _agree(annot, hint, what):
    if annot is None:
        return hint
    if hint is not None and not same_space(annot, hint):
        raise TermTypeError(f"{what}: annotated {annot!r} but context gives {hint!r}")
    return annot


def _child(label, f, dom, cod):
    try:
        return _elab(f, dom, cod)
    except TermTypeError as e:
        raise e.under(label) from None
    except ShapeError as e:
        raise TermTypeError(str(e), (label,)) from None


def _elab(f, dom, cod):
    """Returns ``(annotated term, domain, codomain)``."""
    t, d, c = _elab_node(f, dom, cod)
    if dom is not None and not same_space(d, dom):
        raise TermTypeError(f"domain {d!r} does not match {dom!r}")
    if cod is not None and not same_space(c, cod):
        raise TermTypeError(f"codomain {c!r} does not match {cod!r}")
    return t, d, c


def _elab_node(f, dom, cod):
    if isinstance(f, Id):
        s = _need(_agree(f.space, dom, "id"), "space of id")
        _agree(s, cod, "id codomain")
        return Id(s), s, s
    if isinstance(f, ScaleMap):
        s = _need(_agree(f.space, dom, "scale"), "space of scale map")
        _agree(s, cod, "scale codomain")
        return ScaleMap(f.k, s), s, s
    if isinstance(f, ZeroMap):
        d = _need(_agree(f.dom, dom, "zero domain"), "domain of zero map")
        c = _need(_agree(f.cod, cod, "zero codomain"), "codomain of zero map")
        return ZeroMap(d, c), d, c
    if isinstance(f, Comp):
        f2, d, mid = _child("f", f.f, dom, None)
        g2, _, c = _child("g", f.g, mid, cod)
        return Comp(g2, f2), d, c
    if isinstance(f, ContractL):
        sv = shape(f.v)
        if not isinstance(sv, TensorSpace):
            raise TermTypeError(f"contractL payload must be a tensor, got {sv!r}")
        u = f.u
        if dom is not None:
            if not isinstance(dom, TensorSpace) or not same_space(dom.left, sv.right):
                raise TermTypeError(f"contractL by {sv!r} cannot take {dom!r}")
            u = _agree(u, dom.right, "contractL context")
        u = _need(u, "uninvolved factor of contractL")
        return ContractL(f.v, u), TensorSpace(sv.right, u), TensorSpace(sv.left, u)
    if isinstance(f, ContractR):
        sw = shape(f.w)
        if not isinstance(sw, TensorSpace):
            raise TermTypeError(f"contractR payload must be a tensor, got {sw!r}")
        left = f.left
        if dom is not None:
            if not isinstance(dom, TensorSpace) or not same_space(dom.right, sw.left):
                raise TermTypeError(f"contractR by {sw!r} cannot take {dom!r}")
            left = _agree(left, dom.left, "contractR context")
        left = _need(left, "left factor of contractR")
        return ContractR(f.w, left), TensorSpace(left, sw.left), TensorSpace(left, sw.right)
    if isinstance(f, Inj):
        fam = f.space
        if fam is None and f.index is not None and dom is not None:
            fam = Pow(f.index, dom)
        fam = _need(_agree(fam, cod, "inj family"), "family of inj")
        if not is_sum(fam):
            raise TermTypeError(f"inj into non-sum {fam!r}")
        try:
            d = summand(fam, f.y)
        except Exception as e:
            raise TermTypeError(str(e)) from None
        _agree(d, dom, "inj domain")
        return Inj(f.y, f.index, fam), d, fam
    if isinstance(f, Proj):
        fam = _need(_agree(f.space, dom, "proj family"), "family of proj")
        if not is_sum(fam):
            raise TermTypeError(f"proj from non-sum {fam!r}")
        try:
            c = summand(fam, f.y)
        except Exception as e:
            raise TermTypeError(str(e)) from None
        _agree(c, cod, "proj codomain")
        return Proj(f.y, fam), fam, c
    if isinstance(f, ParMap):
        doms = _family_hint(dom, len(f.parts), f.index, "par")
        cods = _family_hint(cod, len(f.parts), f.index, "par codomain")
        parts, ds, cs = [], [], []
        for i, (p, dh, ch) in enumerate(zip(f.parts, doms, cods)):
            p2, d, c = _child(f"par[{i}]", p, dh, ch)
            parts.append(p2)
            ds.append(d)
            cs.append(c)
        d = dom if dom is not None else _family(ds, f.index, "par domain")
        return ParMap(tuple(parts), f.index), d, _family(cs, f.index, "par codomain")
    if isinstance(f, PowMap):
        body = None
        if dom is not None:
            cd = canon(dom)
            if not (isinstance(cd, Pow) and cd.index == f.index):
                raise TermTypeError(f"pow over {f.index!r} cannot take {dom!r}")
            body = cd.body
        g, d, c = _child("f", f.f, body, None)
        return PowMap(f.index, g), Pow(f.index, d), Pow(f.index, c)
    if isinstance(f, Fanout):
        d = _agree(f.dom, dom, "fanout domain")
        parts, cs = [], []
        for i, p in enumerate(f.parts):
            p2, pd, c = _child(f"fanout[{i}]", p, d, None)
            d = pd if d is None else d
            parts.append(p2)
            cs.append(c)
        d = _need(d, "domain of fanout")
        return Fanout(tuple(parts), f.index, d), d, _family(cs, f.index, "fanout codomain")
    if isinstance(f, PlusMap):
        first, second = ("f", f.f), ("g", f.g)
        if isinstance(f.f, ZeroMap) and f.f.cod is None and cod is None:
            first, second = second, first
        t1, d, c = _child(first[0], first[1], dom, cod)
        t2, d2, c2 = _child(second[0], second[1], d, c)
        if first[0] == "g":
            t1, t2 = t2, t1
        return PlusMap(t1, t2), d, c
    if isinstance(f, Red):
        body = f.body
        if dom is not None:
            cd = canon(dom)
            empty = f.rel.domain.card() == 0 and is_sum(dom) and not summands(dom)
            if not empty and not (isinstance(cd, Pow) and cd.index == f.rel.domain):
                raise TermTypeError(f"red over {f.rel.domain!r} cannot take {dom!r}")
            if not empty:
                body = _agree(body, cd.body, "red body")
        body = _need(body, "body space of red")
        return (
            Red(f.rel, body),
            Pow(f.rel.domain, body),
            Pow(f.rel.codomain, body),
        )
    if isinstance(f, Unitary):
        s = _need(_agree(f.at, dom, f.kind), f"space of {f.kind}")
        c = unitary_codomain(f.kind, s)
        _agree(c, cod, f"{f.kind} codomain")
        return Unitary(f.kind, s), s, c
    raise TermTypeError(f"not a linear term: {f!r}")


def _family_hint(space, n, index, what):
    if space is None:
        return [None] * n
    if not is_sum(space):
        raise TermTypeError(f"{what}: expected a direct sum, got {space!r}")
    comps = summands(space)
    if len(comps) != n:
        raise TermTypeError(f"{what}: {n} parts against {len(comps)} components")
    if index is not None and sum_index(canon(space)) != index and sum_index(space) != index:
        raise TermTypeError(f"{what}: index {index!r} against {space!r}")
    return list(comps)


def _family(spaces, index, what):
    if index is None:
        return TupleSpace(tuple(spaces))
    if not spaces:
        raise TermTypeError(f"{what}: empty copower family needs a body")
    if any(not same_space(s, spaces[0]) for s in spaces):
        raise TermTypeError(f"{what}: components over {index!r} differ")
    return Pow(index, spaces[0])


def _pair(space):
    comps = summands(space) if is_sum(space) else ()
    if len(comps) != 2:
        raise TermTypeError(f"expected a pair space, got {space!r}")
    return comps


def unitary_codomain(kind: str, s: SpaceTerm) -> SpaceTerm:
    if kind == "bra":
        return TensorSpace(R, s)
    if kind == "ket":
        return TensorSpace(s, R)
    if not isinstance(s, TensorSpace) and kind not in ("distrib_inv", "zip", "unzip"):
        raise TermTypeError(f"{kind} needs a tensor space, got {s!r}")
    if kind == "ibra":
        if not isinstance(s.left, Scalar):
            raise TermTypeError(f"ibra needs R ⊗ V, got {s!r}")
        return s.right
    if kind == "iket":
        if not isinstance(s.right, Scalar):
            raise TermTypeError(f"iket needs V ⊗ R, got {s!r}")
        return s.left
    if kind == "ttranspose":
        return TensorSpace(s.right, s.left)
    if kind == "assoc":
        if not isinstance(s.left, TensorSpace):
            raise TermTypeError(f"assoc needs (U ⊗ V) ⊗ W, got {s!r}")
        return TensorSpace(s.left.left, TensorSpace(s.left.right, s.right))
    if kind == "assoc_inv":
        if not isinstance(s.right, TensorSpace):
            raise TermTypeError(f"assoc_inv needs U ⊗ (V ⊗ W), got {s!r}")
        return TensorSpace(TensorSpace(s.left, s.right.left), s.right.right)
    if kind == "distrib":
        if not is_sum(s.left):
            raise TermTypeError(f"distrib needs a direct sum on the left, got {s!r}")
        if isinstance(s.left, Pow):
            return Pow(s.left.index, TensorSpace(s.left.body, s.right))
        return TupleSpace(tuple(TensorSpace(c, s.right) for c in s.left.components))
    if kind == "distrib_inv":
        if not is_sum(s):
            raise TermTypeError(f"distrib_inv needs a direct sum, got {s!r}")
        comps = summands(s)
        if not comps or any(not isinstance(c, TensorSpace) for c in comps):
            raise TermTypeError(f"distrib_inv needs a sum of tensors, got {s!r}")
        w = comps[0].right
        if any(not same_space(c.right, w) for c in comps):
            raise TermTypeError(f"distrib_inv needs a common right factor in {s!r}")
        if isinstance(s, Pow):
            return TensorSpace(Pow(s.index, s.body.left), w)
        return TensorSpace(TupleSpace(tuple(c.left for c in comps)), w)
    if kind == "zip":
        a, b = _pair(s)
        if not is_sum(a) or not is_sum(b):
            raise TermTypeError(f"zip needs a pair of direct sums, got {s!r}")
        if isinstance(a, Pow) and isinstance(b, Pow):
            if a.index != b.index:
                raise TermTypeError(f"zip of different index sets in {s!r}")
            return Pow(a.index, TupleSpace((a.body, b.body)))
        ca, cb = summands(a), summands(b)
        if len(ca) != len(cb):
            raise TermTypeError(f"zip of different lengths in {s!r}")
        return TupleSpace(tuple(TupleSpace((x, y)) for x, y in zip(ca, cb)))
    if kind == "unzip":
        if not is_sum(s):
            raise TermTypeError(f"unzip needs a direct sum of pairs, got {s!r}")
        pairs = [_pair(c) for c in summands(s)]
        if isinstance(s, Pow):
            a, b = _pair(s.body)
            return TupleSpace((Pow(s.index, a), Pow(s.index, b)))
        return TupleSpace(
            (TupleSpace(tuple(p[0] for p in pairs)), TupleSpace(tuple(p[1] for p in pairs)))
        )
    raise TermTypeError(f"unknown unitary {kind!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _unit_scale(k: float, v: Vector) -> Vector:
    return v if k == 1.0 else vec_scale(k, v)


def apply(f: LinTerm, v: Vector) -> Vector:
    if isinstance(f, Id):
        return v
    if isinstance(f, Comp):
        return apply(f.g, apply(f.f, v))
    if isinstance(f, ScaleMap):
        return vec_scale(f.k, v)
    if isinstance(f, ZeroMap):
        if f.cod is None:
            raise TermTypeError("zero map without codomain cannot be applied")
        return VZero(f.cod)
    if isinstance(f, ContractL):
        return contract(f.v, v)
    if isinstance(f, ContractR):
        return contract(v, f.w)
    if isinstance(f, Proj):
        return component(v, f.y)
    if isinstance(f, Inj):
        fam = f.space
        if fam is None:
            if f.index is None:
                raise TermTypeError("inj without a family cannot be applied")
            fam = Pow(f.index, shape(v))
        idx = sum_index(fam)
        if f.y not in idx:
            raise ShapeError(f"{f.y!r} is not a component of {fam!r}")
        items = [v if x == f.y else VZero(s) for x, s in zip(idx.elements, summands(fam))]
        return sum_vector(fam, items)
    if isinstance(f, ParMap):
        comps = components(v)
        if len(comps) != len(f.parts):
            raise ShapeError(f"par of {len(f.parts)} parts applied to {len(comps)} components")
        out = [apply(p, c) for p, c in zip(f.parts, comps)]
        if f.index is None:
            return VTuple(out)
        return VMap(f.index, out, shape(out[0]) if out else None)
    if isinstance(f, PowMap):
        comps = components(v)
        out = [apply(f.f, c) for c in comps]
        return VMap(f.index, out, shape(out[0]) if out else None)
    if isinstance(f, Fanout):
        out = [apply(p, v) for p in f.parts]
        if f.index is None:
            return VTuple(out)
        return VMap(f.index, out, shape(out[0]) if out else None)
    if isinstance(f, PlusMap):
        return vec_add(apply(f.f, v), apply(f.g, v))
    if isinstance(f, Red):
        return _apply_red(f, v)
    if isinstance(f, Unitary):
        return _apply_unitary(f.kind, v)
    raise TermTypeError(f"not a linear term: {f!r}")


def _apply_red(f: Red, v: Vector) -> Vector:
    comps = components(v)
    rel = f.rel
    if len(comps) != rel.domain.card():
        raise ShapeError(f"red over {rel.domain!r} applied to {len(comps)} components")
    body = f.body if f.body is not None else (shape(comps[0]) if comps else None)
    if body is None:
        raise TermTypeError("red over an empty domain needs a body annotation")
    acc = {y: VZero(body) for y in rel.codomain.elements}
    for x, y in rel.pairs:
        acc[y] = vec_add(acc[y], comps[rel.domain.position(x)])
    return VMap(rel.codomain, [acc[y] for y in rel.codomain.elements], body)


def _apply_unitary(kind: str, v: Vector) -> Vector:
    s = shape(v)
    if kind == "bra":
        return VTensor(TensorSpace(R, s), ((1.0, VScalar(1.0), v),))
    if kind == "ket":
        return VTensor(TensorSpace(s, R), ((1.0, v, VScalar(1.0)),))
    if kind in ("ibra", "iket"):
        out_space = unitary_codomain(kind, s)
        acc = VZero(out_space)
        for c, a, b in tensor_terms(v):
            k, w = (scalar_value(a), b) if kind == "ibra" else (scalar_value(b), a)
            acc = vec_add(acc, _unit_scale(coeff_mul(c, k), w))
        return acc
    if kind == "ttranspose":
        return transpose_tensor(v)
    if kind == "assoc":
        out_space = unitary_codomain(kind, s)
        inner_space = out_space.right
        terms = []
        for c, ab, w in tensor_terms(v):
            for c2, a, b in tensor_terms(ab):
                terms.append((coeff_mul(c, c2), a, VTensor(inner_space, ((1.0, b, w),))))
        return VTensor(out_space, tuple(terms))
    if kind == "assoc_inv":
        out_space = unitary_codomain(kind, s)
        inner_space = out_space.left
        terms = []
        for c, a, bw in tensor_terms(v):
            for c2, b, w in tensor_terms(bw):
                terms.append((coeff_mul(c, c2), VTensor(inner_space, ((1.0, a, b),)), w))
        return VTensor(out_space, tuple(terms))
    if kind == "distrib":
        out_space = unitary_codomain(kind, s)
        idx = sum_index(s.left)
        parts = {x: [] for x in idx.elements}
        for c, a, w in tensor_terms(v):
            for x, ax in zip(idx.elements, components(a)):
                parts[x].append((c, ax, w))
        items = [VTensor(cs, tuple(parts[x])) for x, cs in zip(idx.elements, summands(out_space))]
        return sum_vector(out_space, items)
    if kind == "distrib_inv":
        out_space = unitary_codomain(kind, s)
        fam = out_space.left
        idx = sum_index(fam)
        terms = []
        for x, vx in zip(idx.elements, components(v)):
            for c, a, w in tensor_terms(vx):
                terms.append((c, apply(Inj(x, space=fam), a), w))
        return VTensor(out_space, tuple(terms))
    if kind == "zip":
        out_space = unitary_codomain(kind, s)
        a, b = components(v)
        pairs = [VTuple((x, y)) for x, y in zip(components(a), components(b))]
        return sum_vector(out_space, pairs)
    if kind == "unzip":
        out_space = unitary_codomain(kind, s)
        firsts, seconds = [], []
        for p in components(v):
            x, y = components(p)
            firsts.append(x)
            seconds.append(y)
        fa, fb = summands(out_space)
        return VTuple((sum_vector(fa, firsts), sum_vector(fb, seconds)))
    raise TermTypeError(f"unknown unitary {kind!r}")


# ---------------------------------------------------------------------------
# Derived constructors (all built from red / inj / proj / par)
# ---------------------------------------------------------------------------


def _copow(index, body):
    return Pow(index, body) if body is not None else None


def rep(Y: IndexSet, body: SpaceTerm | None = None) -> LinTerm:
    """``rep_Y = red_{⟨1⟩×Y} • inj_1``: ``V ⊸ ∏^Y V``."""
    one = Seg(1)
    return Comp(Red(full_relation(one, Y), body), Inj(1, one, _copow(one, body)))


def sum_over(Y: IndexSet, body: SpaceTerm | None = None) -> LinTerm:
    """``Σ_Y = proj_1 • red_{Y×⟨1⟩}``: ``∏^Y V ⊸ V``."""
    one = Seg(1)
    return Comp(Proj(1, _copow(one, body)), Red(full_relation(Y, one), body))


def plus(body: SpaceTerm | None = None) -> LinTerm:
    return sum_over(Seg(2), body)


def dup(body: SpaceTerm | None = None) -> LinTerm:
    return rep(Seg(2), body)


def scan(n: int, body: SpaceTerm | None = None) -> LinTerm:
    X = Seg(n)
    pairs = tuple((i, j) for i in X.elements for j in X.elements if i <= j)
    return Red(Relation(X, X, pairs), body)


def fanin(parts, index: IndexSet | None = None, body: SpaceTerm | None = None) -> LinTerm:
    """``[g_x] = Σ_X • Π g_x``."""
    X = index if index is not None else Seg(len(parts))
    return Comp(sum_over(X, body), ParMap(tuple(parts), index))


def minus(body: SpaceTerm | None = None) -> LinTerm:
    """``(a, b) ↦ a − b`` as ``+ • (id × (−1·))``."""
    return Comp(plus(body), ParMap((Id(body), ScaleMap(-1.0, body))))


def zip_apply(X: IndexSet, f: LinTerm) -> LinTerm:
    return PowMap(X, f)


_DERIVED = {
    "rep": rep,
    "sum": sum_over,
    "plus": plus,
    "dup": dup,
    "scan": scan,
    "fanin": fanin,
    "minus": minus,
    "zip_apply": zip_apply,
}


def derive(name: str, *params, **kw) -> LinTerm:
    try:
        builder = _DERIVED[name]
    except KeyError:
        raise TermTypeError(f"no derived constructor named {name!r}") from None
    return builder(*params, **kw)


# ---------------------------------------------------------------------------


def term_size(f: LinTerm) -> int:
    """Node count; vector and relation payloads count one each."""
    if isinstance(f, Comp):
        return 1 + term_size(f.g) + term_size(f.f)
    if isinstance(f, PlusMap):
        return 1 + term_size(f.f) + term_size(f.g)
    if isinstance(f, (ContractL, ContractR, Red)):
        return 2
    if isinstance(f, (ParMap, Fanout)):
        return 1 + sum(term_size(p) for p in f.parts)
    if isinstance(f, PowMap):
        return 1 + term_size(f.f)
    return 1


def subterms(f: LinTerm):
    """Pre-order traversal."""
    yield f
    if isinstance(f, Comp):
        yield from subterms(f.g)
        yield from subterms(f.f)
    elif isinstance(f, PlusMap):
        yield from subterms(f.f)
        yield from subterms(f.g)
    elif isinstance(f, (ParMap, Fanout)):
        for p in f.parts:
            yield from subterms(p)
    elif isinstance(f, PowMap):
        yield from subterms(f.f)


__all__ = [
    "LinTerm",
    "Id",
    "ZeroMap",
    "Comp",
    "ContractL",
    "ContractR",
    "ScaleMap",
    "Inj",
    "Proj",
    "ParMap",
    "PowMap",
    "Fanout",
    "PlusMap",
    "Red",
    "Unitary",
    "TypeSig",
    "UNITARIES",
    "UNITARY_INVERSE",
    "infer_types",
    "annotate",
    "apply",
    "unitary_codomain",
    "rep",
    "sum_over",
    "plus",
    "dup",
    "scan",
    "fanin",
    "minus",
    "zip_apply",
    "derive",
    "term_size",
    "subterms",
]
