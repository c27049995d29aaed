"""Random well-typed terms and the named example terms.

Generators take a numpy ``Generator`` and always return annotated terms
together with their domain, so callers can lower them or evaluate them
without further inference.  Dimensions stay at or below ``MAX_DIM``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .funterm import (
    FBilin,
    FComp,
    FConst,
    FLin,
    FPar,
    FPow,
    FunTerm,
    bilin,
    fadd,
    fanout,
    fmul,
    fsub,
    fun_codomain,
    prim,
)
from .linterm import (
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
    annotate,
    infer_types,
    unitary_codomain,
)
from .spaces import (
    R,
    Pow,
    Relation,
    Scalar,
    Seg,
    SpaceTerm,
    TensorSpace,
    TupleSpace,
    Vector,
    canon,
    dim,
    is_sum,
    random_vector,
    real_vector_space,
    sum_index,
    summands,
    vec,
)

MAX_DIM = 6


def _rv(n):
    return real_vector_space(n)


def random_space(rng: np.random.Generator, max_dim: int = 4) -> SpaceTerm:
    kind = rng.integers(0, 5)
    if kind == 0 or max_dim < 2:
        return R
    if kind == 1:
        return _rv(int(rng.integers(1, max_dim + 1)))
    if kind == 2:
        return TupleSpace((R, _rv(int(rng.integers(1, max_dim)))))
    if kind == 3:
        a = int(rng.integers(1, 3))
        b = int(rng.integers(1, max(2, max_dim // a) + 1))
        return TensorSpace(_rv(a), _rv(min(b, max_dim // a)))
    return _rv(2)


def random_relation(rng, X, Y, density=0.5) -> Relation:
    pairs = tuple((x, y) for x in X.elements for y in Y.elements if rng.random() < density)
    return Relation(X, Y, pairs)


# ---------------------------------------------------------------------------
# Linear terms
# ---------------------------------------------------------------------------


def _leaf(rng, dom):
    """Single-node terms available at ``dom``; returns ``(term, cod)``."""
    opts = ["id", "scale", "bra", "ket"]
    cd = canon(dom)
    if is_sum(dom) and summands(dom):
        opts += ["proj", "proj"]
    if isinstance(cd, Pow) and cd.index.card() >= 1:
        opts += ["red", "red"]
    if isinstance(dom, TensorSpace):
        opts += ["contractL", "contractR", "ttranspose"]
        if isinstance(dom.left, Scalar):
            opts.append("ibra")
        if isinstance(dom.right, Scalar):
            opts.append("iket")
        if isinstance(dom.left, TensorSpace):
            opts.append("assoc")
        if isinstance(dom.right, TensorSpace):
            opts.append("assoc_inv")
        if is_sum(dom.left):
            opts.append("distrib")
    if is_sum(dom) and summands(dom):
        comps = summands(dom)
        if all(isinstance(c, TensorSpace) for c in comps) and all(
            c.right == comps[0].right for c in comps
        ):
            opts.append("distrib_inv")
        if len(comps) == 2 and all(is_sum(c) for c in comps):
            a, b = comps
            if isinstance(a, Pow) and isinstance(b, Pow) and a.index == b.index:
                opts.append("zip")
        if all(is_sum(c) and len(summands(c)) == 2 for c in comps) and isinstance(dom, Pow):
            opts.append("unzip")
    if dim(dom) * 2 <= MAX_DIM:
        opts.append("inj")
    choice = opts[rng.integers(0, len(opts))]
    if choice == "id":
        return Id(dom), dom
    if choice == "scale":
        return ScaleMap(float(rng.uniform(-2, 2)), dom), dom
    if choice == "proj":
        y = sum_index(dom).elements[rng.integers(0, len(summands(dom)))]
        t = annotate(Proj(y, dom), dom)
        return t, infer_types(t).codomain
    if choice == "red":
        X = cd.index
        Y = Seg(int(rng.integers(1, 4)))
        if dim(cd.body) * Y.card() > MAX_DIM:
            Y = Seg(1)
        t = Red(random_relation(rng, X, Y), cd.body)
        return t, Pow(Y, cd.body)
    if choice == "contractL":
        W = _rv(int(rng.integers(1, 3)))
        if dim(W) * dim(dom.right) > MAX_DIM:
            W = R
        v = random_vector(TensorSpace(W, dom.left), rng)
        return ContractL(v, dom.right), TensorSpace(W, dom.right)
    if choice == "contractR":
        W = _rv(int(rng.integers(1, 3)))
        if dim(W) * dim(dom.left) > MAX_DIM:
            W = R
        w = random_vector(TensorSpace(dom.right, W), rng)
        return ContractR(w, dom.left), TensorSpace(dom.left, W)
    if choice == "inj":
        if rng.random() < 0.5:
            fam = TupleSpace((dom, R)) if dim(dom) + 1 <= MAX_DIM else TupleSpace((dom,))
            return Inj(1, None, fam), fam
        fam = Pow(Seg(2), dom)
        return Inj(int(rng.integers(1, 3)), Seg(2), fam), fam
    return Unitary(choice, dom), unitary_codomain(choice, dom)


def _endo(rng, space, depth):
    """A random ``space ⊸ space``."""
    cd = canon(space)
    r = rng.integers(0, 4)
    if depth > 0 and r == 0 and isinstance(cd, Pow):
        return PowMap(cd.index, _endo(rng, cd.body, depth - 1))
    if r == 1 and isinstance(cd, Pow) and cd.index.card() >= 1:
        return Red(random_relation(rng, cd.index, cd.index, 0.6), cd.body)
    if r == 2 and isinstance(space, TensorSpace):
        return ContractL(random_vector(TensorSpace(space.left, space.left), rng), space.right)
    return ScaleMap(float(rng.uniform(-2, 2)), space)


def random_linterm(rng: np.random.Generator, dom: SpaceTerm, depth: int = 4):
    """Returns ``(term, codomain)``; the term is fully annotated."""
    if depth <= 0:
        return _leaf(rng, dom)
    r = rng.integers(0, 10)
    if r <= 2:
        f, mid = random_linterm(rng, dom, depth - 1)
        g, cod = random_linterm(rng, mid, depth - 1)
        return Comp(g, f), cod
    if r == 3 and is_sum(dom) and summands(dom):
        comps = summands(dom)
        if isinstance(dom, Pow):
            f, c = random_linterm(rng, dom.body, depth - 1)
            if dim(c) * dom.index.card() <= MAX_DIM:
                return PowMap(dom.index, f), Pow(dom.index, c)
        else:
            parts, cods = zip(*(random_linterm(rng, c, depth - 1) for c in comps))
            if sum(dim(c) for c in cods) <= MAX_DIM:
                return ParMap(tuple(parts)), TupleSpace(tuple(cods))
    if r == 4:
        n = int(rng.integers(1, 3))
        parts, cods = zip(*(random_linterm(rng, dom, depth - 1) for _ in range(n)))
        if sum(dim(c) for c in cods) <= MAX_DIM:
            return Fanout(tuple(parts), None, dom), TupleSpace(tuple(cods))
    if r == 5:
        f, cod = random_linterm(rng, dom, depth - 1)
        return PlusMap(f, Comp(_endo(rng, cod, depth - 1), f)), cod
    if r == 6:
        f, cod = random_linterm(rng, dom, depth - 1)
        return Comp(_endo(rng, cod, depth - 1), f), cod
    if r == 7 and rng.random() < 0.3:
        cod = random_space(rng)
        return ZeroMap(dom, cod), cod
    return _leaf(rng, dom)


def unitary_test_space(kind: str, rng: np.random.Generator) -> SpaceTerm:
    """A random space on which the unitary ``kind`` is defined."""
    n = lambda: _rv(int(rng.integers(1, 3)))
    if kind in ("bra", "ket"):
        return random_space(rng)
    if kind == "ibra":
        return TensorSpace(R, random_space(rng))
    if kind == "iket":
        return TensorSpace(random_space(rng), R)
    if kind == "ttranspose":
        return TensorSpace(n(), n())
    if kind == "assoc":
        return TensorSpace(TensorSpace(n(), n()), n())
    if kind == "assoc_inv":
        return TensorSpace(n(), TensorSpace(n(), n()))
    if kind == "distrib":
        left = n() if rng.random() < 0.5 else TupleSpace((R, n()))
        return TensorSpace(left, n())
    if kind == "distrib_inv":
        w = n()
        if rng.random() < 0.5:
            return Pow(Seg(int(rng.integers(1, 3))), TensorSpace(n(), w))
        return TupleSpace((TensorSpace(R, w), TensorSpace(n(), w)))
    if kind == "zip":
        if rng.random() < 0.5:
            X = Seg(int(rng.integers(1, 4)))
            return TupleSpace((Pow(X, R), Pow(X, n())))
        return TupleSpace((TupleSpace((R, n())), TupleSpace((n(), R))))
    if kind == "unzip":
        if rng.random() < 0.5:
            return Pow(Seg(int(rng.integers(1, 4))), TupleSpace((R, n())))
        return TupleSpace((TupleSpace((R, n())), TupleSpace((n(), R))))
    raise ValueError(f"unknown unitary {kind!r}")


def linterm_corpus(count: int = 200, seed: int = 0, depth: int = 4):
    """``count`` random ``(term, domain)`` pairs."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        dom = random_space(rng)
        t, cod = random_linterm(rng, dom, int(rng.integers(1, depth + 1)))
        if dim(cod) > MAX_DIM:
            continue
        sig = infer_types(t, dom)
        out.append((annotate(t, dom), sig.domain))
    return out


# ---------------------------------------------------------------------------
# Function terms
# ---------------------------------------------------------------------------

# Entire on the reals with bounded derivatives, so central differences
# with the default step stay well inside tolerance.
SAFE_PRIMS = ("sin", "cos", "tanh")


def _scalar_fun(rng, depth):
    if depth <= 0 or rng.random() < 0.3:
        r = rng.integers(0, 5)
        if r == 3:
            return prim("pow", int(rng.integers(2, 4)))
        if r == 4:
            return FLin(ScaleMap(float(rng.uniform(-2, 2)), R))
        return prim(SAFE_PRIMS[r])
    r = rng.integers(0, 3)
    if r == 0:
        return FComp(_scalar_fun(rng, depth - 1), _scalar_fun(rng, depth - 1))
    if r == 1:
        return fmul(_scalar_fun(rng, depth - 1), _scalar_fun(rng, depth - 1))
    return fadd(_scalar_fun(rng, depth - 1), _scalar_fun(rng, depth - 1))


def random_funterm(rng: np.random.Generator, dom: SpaceTerm, depth: int = 4) -> tuple:
    """Returns ``(term, codomain)`` for a smooth term defined on all of
    ``dom``."""
    cd = canon(dom)
    if isinstance(cd, Scalar):
        t = _scalar_fun(rng, depth)
        return t, R
    if depth <= 0:
        h, cod = random_linterm(rng, dom, 1)
        return FLin(h), cod
    r = rng.integers(0, 8)
    if r == 0 and isinstance(cd, Pow):
        f, c = random_funterm(rng, cd.body, depth - 1)
        if dim(c) * cd.index.card() <= MAX_DIM:
            return FPow(cd.index, f), Pow(cd.index, c)
    if r == 1 and isinstance(dom, TupleSpace):
        parts, cods = zip(*(random_funterm(rng, c, depth - 1) for c in dom.components))
        if sum(dim(c) for c in cods) <= MAX_DIM:
            return FPar(tuple(parts)), TupleSpace(tuple(cods))
    if r in (2, 3):
        f, c1 = random_funterm(rng, dom, depth - 1)
        g, c2 = random_funterm(rng, dom, depth - 1)
        op = _bilinear_for(rng, c1, c2)
        if op is not None:
            t = FComp(bilin(op), fanout(f, g))
            cod = fun_codomain(t, dom)
            if dim(cod) <= MAX_DIM:
                return t, cod
    if r == 4:
        f, c = random_funterm(rng, dom, depth - 1)
        g, c2 = random_funterm(rng, c, depth - 1)
        return FComp(g, f), c2
    if r == 5:
        f, c = random_funterm(rng, dom, depth - 1)
        w = random_vector(c, rng)
        return FComp(bilin("dot"), fanout(FConst(w), f)), R
    if r == 6:
        h, c = random_linterm(rng, dom, 2)
        g, c2 = random_funterm(rng, c, depth - 1)
        return FComp(g, FLin(h)), c2
    h, cod = random_linterm(rng, dom, 1)
    return FLin(h), cod


def _bilinear_for(rng, a, b):
    opts = []
    if a == b or canon(a) == canon(b):
        opts += ["dot", "hadamard"] if not _tensorial(a) else ["dot"]
    if isinstance(canon(a), Scalar):
        opts.append("mul")
    if isinstance(a, TensorSpace) and canon(a.right) == canon(b):
        opts.append("matvec")
    if isinstance(a, TensorSpace) and isinstance(b, TensorSpace) and canon(a.right) == canon(b.left):
        opts.append("contract")
    if dim(a) * dim(b) <= MAX_DIM:
        opts.append("tensor")
    if not opts:
        return None
    return opts[rng.integers(0, len(opts))]


def _tensorial(s):
    if isinstance(s, TensorSpace):
        return True
    return is_sum(s) and any(_tensorial(c) for c in summands(s))


@dataclass(frozen=True)
class FunCase:
    name: str
    term: FunTerm
    domain: SpaceTerm
    point: Vector


def funterm_corpus(count: int = 200, seed: int = 0, depth: int = 5) -> list:
    """``count`` random cases with evaluation points in ``[-1.5, 1.5]``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        dom = random_space(rng)
        t, cod = random_funterm(rng, dom, int(rng.integers(1, depth + 1)))
        if dim(cod) > MAX_DIM or dim(dom) == 0:
            continue
        v = random_vector(dom, rng, max_terms=2)
        out.append(FunCase(f"random-{len(out)}", t, dom, v))
    return out


# ---------------------------------------------------------------------------
# Named examples
# ---------------------------------------------------------------------------


def _p(i):
    return FLin(Proj(i))


def ln_sin() -> FunTerm:
    """``ln ∘ sin``."""
    return FComp(prim("ln"), prim("sin"))


def two_var_example() -> FunTerm:
    """``(x1, x2) ↦ ln x1 + x1·x2 − sin x2``."""
    return fsub(
        fadd(FComp(prim("ln"), _p(1)), fmul(_p(1), _p(2))),
        FComp(prim("sin"), _p(2)),
    )


def two_var_gradient(x1: float, x2: float) -> tuple:
    import math

    return (1.0 / x1 + x2, x1 - math.cos(x2))


def swell_chain(k: int) -> FunTerm:
    """``k`` nested two-variable steps ``(x1, x2) ↦ (exp(tanh(x1·x2)), x2)``
    followed by a final product; a chain whose naive symbolic derivative
    would grow quadratically."""
    step = fanout(FComp(prim("exp"), FComp(prim("tanh"), fmul(_p(1), _p(2)))), _p(2))
    t: FunTerm = step
    for _ in range(k - 1):
        t = FComp(step, t)
    return FComp(fmul(_p(1), _p(2)), t)


def named_cases() -> list:
    from .oracle import griewank_term
    from .spaces import VScalar

    pair = TupleSpace((R, R))
    a = vec(0.5, -1.0, 2.0)
    b = vec(1.0, 2.0)
    cases = [
        FunCase("ln-sin", ln_sin(), R, VScalar(1.0)),
        FunCase("two-var", two_var_example(), pair, _tuple(2.0, 5.0)),
        FunCase("griewank", griewank_term(a, b), _rv(3), vec(0.3, -0.2, 0.7)),
        FunCase("swell-chain", swell_chain(3), pair, _tuple(0.4, 0.7)),
    ]
    from .nn import NetworkSpec, build_network, init_params

    spec = NetworkSpec((2, 3, 1))
    p = init_params(spec, np.random.default_rng(1), x=(0.2, -0.4), y=(0.5,))
    cases.append(FunCase("network-2-3-1", build_network(spec), spec.param_space(), p))
    return cases


def _tuple(*xs):
    from .spaces import VScalar, VTuple

    return VTuple(tuple(VScalar(float(x)) for x in xs))


__all__ = [
    "MAX_DIM",
    "SAFE_PRIMS",
    "FunCase",
    "random_space",
    "random_relation",
    "random_linterm",
    "random_funterm",
    "unitary_test_space",
    "linterm_corpus",
    "funterm_corpus",
    "ln_sin",
    "two_var_example",
    "two_var_gradient",
    "swell_chain",
    "named_cases",
]
