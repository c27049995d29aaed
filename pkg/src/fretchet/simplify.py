"""Semantics-preserving rewriting of linear terms.

The rule set is deliberately small and conservative.  Each rule is a
:class:`RewriteRule` with a matcher that either declines (``None``) or
returns the replacement, plus a sampler that produces random instances for
:func:`rule_soundness_suite`.  :func:`simplify` applies the rules
leftmost-innermost until nothing fires or the step budget runs out.

Composition chains are first right-associated, so pairwise rules such as
scale fusion also look one step down the chain: ``g • (f • rest)`` is
treated like ``(g • f) • rest``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import MissingAnnotation, TermTypeError
from .linterm import (
    UNITARY_INVERSE,
    UNITARIES,
    Comp,
    ContractL,
    ContractR,
    Fanout,
    Id,
    LinTerm,
    ParMap,
    PlusMap,
    PowMap,
    Red,
    ScaleMap,
    Unitary,
    ZeroMap,
    annotate,
    infer_types,
    term_size,
)
from .spaces import Pow, Seg, SpaceTerm, TensorSpace, TupleSpace, contract, random_vector, same_space


@dataclass(frozen=True)
class RewriteRule:
    name: str
    match: Callable[[LinTerm], LinTerm | None]
    note: str
    sample: Callable[[np.random.Generator], tuple] | None = None

    def rewrite(self, f: LinTerm) -> LinTerm | None:
        return self.match(f)


@dataclass
class SimplifyStats:
    size_before: int
    size_after: int = 0
    steps: int = 0
    budget: int = 0
    exhausted: bool = False
    fired: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Type helpers; a rule that needs a space it cannot find simply declines
# ---------------------------------------------------------------------------


def _sig(f, dom=None):
    try:
        return infer_types(f, dom)
    except TermTypeError:
        return None


def _pairwise(fuse):
    """Lift ``fuse(g, f)`` to also match ``g • (f • rest)``."""

    def match(t):
        if not isinstance(t, Comp):
            return None
        out = fuse(t.g, t.f)
        if out is not None:
            return out
        if isinstance(t.f, Comp):
            out = fuse(t.g, t.f.g)
            if out is not None:
                return Comp(out, t.f.f)
        return None

    return match


# ---------------------------------------------------------------------------
# Matchers
# ---------------------------------------------------------------------------


def _id_left(t):
    if isinstance(t, Comp) and isinstance(t.g, Id):
        return t.f
    return None


def _id_right(t):
    if isinstance(t, Comp) and isinstance(t.f, Id):
        return t.g
    return None


def _zero_left(t):
    if not (isinstance(t, Comp) and isinstance(t.g, ZeroMap)) or t.g.cod is None:
        return None
    sig = _sig(t.f)
    if sig is None:
        return None
    return ZeroMap(sig.domain, t.g.cod)


def _zero_right(t):
    if not (isinstance(t, Comp) and isinstance(t.f, ZeroMap)) or t.f.dom is None:
        return None
    sig = _sig(t.g, t.f.cod)
    if sig is None:
        return None
    return ZeroMap(t.f.dom, sig.codomain)


def _plus_zero(t):
    if not isinstance(t, PlusMap):
        return None
    if isinstance(t.f, ZeroMap):
        return t.g
    if isinstance(t.g, ZeroMap):
        return t.f
    return None


def _scale_zero(t):
    if isinstance(t, ScaleMap) and t.k == 0.0 and t.space is not None:
        return ZeroMap(t.space, t.space)
    return None


def _scale_one(t):
    if isinstance(t, ScaleMap) and t.k == 1.0:
        return Id(t.space)
    return None


def _scale_fuse(g, f):
    if isinstance(g, ScaleMap) and isinstance(f, ScaleMap):
        return ScaleMap(g.k * f.k, f.space if f.space is not None else g.space)
    return None


def _unitary_cancel(g, f):
    if isinstance(g, Unitary) and isinstance(f, Unitary) and UNITARY_INVERSE[f.kind] == g.kind:
        return Id(f.at)
    return None


def _par_fuse(g, f):
    if isinstance(g, PowMap) and isinstance(f, PowMap) and g.index == f.index:
        return PowMap(f.index, Comp(g.f, f.f))
    if not (isinstance(g, ParMap) and isinstance(f, ParMap)):
        return None
    if g.index != f.index or len(g.parts) != len(f.parts):
        return None
    fused = ParMap(tuple(Comp(a, b) for a, b in zip(g.parts, f.parts)), f.index)
    if len(f.parts) > 2:
        # The fused form carries one extra Comp per component; only keep it
        # if the components then shrink enough to pay for that.
        fused = ParMap(tuple(simplify(p) for p in fused.parts), f.index)
        if term_size(fused) > 1 + term_size(g) + term_size(f):
            return None
    return fused


def _par_id(t):
    if isinstance(t, PowMap) and isinstance(t.f, Id):
        return Id(Pow(t.index, t.f.space) if t.f.space is not None else None)
    if not isinstance(t, ParMap) or not all(isinstance(p, Id) for p in t.parts):
        return None
    spaces = [p.space for p in t.parts]
    if any(s is None for s in spaces):
        return Id(None)
    if t.index is None:
        return Id(TupleSpace(tuple(spaces)))
    if not spaces:
        return None
    return Id(Pow(t.index, spaces[0]))


def _contract_fuse_left(g, f):
    # v∗(w∗x) = (v∗w)∗x
    if isinstance(g, ContractL) and isinstance(f, ContractL):
        try:
            vw = contract(g.v, f.v)
        except Exception:
            return None
        return ContractL(vw, f.u if f.u is not None else g.u)
    return None


def _contract_fuse_right(g, f):
    # (x∗w')∗w = x∗(w'∗w)
    if isinstance(g, ContractR) and isinstance(f, ContractR):
        try:
            ww = contract(f.w, g.w)
        except Exception:
            return None
        return ContractR(ww, f.left if f.left is not None else g.left)
    return None


def _red_fuse(g, f):
    if not (isinstance(g, Red) and isinstance(f, Red)):
        return None
    first, second = f.rel, g.rel
    if first.codomain != second.domain:
        return None
    # A component reached along two paths is summed twice; a single
    # relation cannot express that, so only fuse multiplicity-free chains.
    if any(n > 1 for n in first.path_counts(second).values()):
        return None
    return Red(first.then(second), f.body if f.body is not None else g.body)


def _reassoc(t):
    if isinstance(t, Comp) and isinstance(t.g, Comp):
        return Comp(t.g.g, Comp(t.g.f, t.f))
    return None


# ---------------------------------------------------------------------------
# Samplers (random instances on which the rule fires at the root)
# ---------------------------------------------------------------------------


def _rand(rng, dom=None, depth=2):
    from .corpus import random_linterm, random_space

    dom = random_space(rng) if dom is None else dom
    t, cod = random_linterm(rng, dom, depth)
    return t, dom, cod


def _s_id_left(rng):
    f, d, c = _rand(rng)
    return Comp(Id(c), f), d


def _s_id_right(rng):
    f, d, c = _rand(rng)
    return Comp(f, Id(d)), d


def _s_zero_left(rng):
    from .corpus import random_space

    f, d, c = _rand(rng)
    return Comp(ZeroMap(c, random_space(rng)), f), d


def _s_zero_right(rng):
    from .corpus import random_space

    g, d, c = _rand(rng)
    d0 = random_space(rng)
    return Comp(g, ZeroMap(d0, d)), d0


def _s_plus_zero(rng):
    f, d, c = _rand(rng)
    if rng.random() < 0.5:
        return PlusMap(ZeroMap(d, c), f), d
    return PlusMap(f, ZeroMap(d, c)), d


def _s_scale_zero(rng):
    from .corpus import random_space

    s = random_space(rng)
    return ScaleMap(0.0, s), s


def _s_scale_one(rng):
    from .corpus import random_space

    s = random_space(rng)
    return ScaleMap(1.0, s), s


def _s_scale_fuse(rng):
    from .corpus import random_space

    s = random_space(rng)
    a, b = rng.uniform(-3, 3, 2)
    t = Comp(ScaleMap(float(a), s), ScaleMap(float(b), s))
    if rng.random() < 0.5:
        # the chained form g • (f • rest)
        rest, d, _ = _rand(rng, None, 1)
        rest_cod = infer_types(rest, d).codomain
        t = Comp(ScaleMap(float(a), rest_cod), Comp(ScaleMap(float(b), rest_cod), rest))
        return t, d
    return t, s


def _s_unitary_cancel(rng):
    from .corpus import unitary_test_space

    kind = UNITARIES[rng.integers(0, len(UNITARIES))]
    s = unitary_test_space(kind, rng)
    u = annotate(Unitary(kind), s)
    back = annotate(Unitary(UNITARY_INVERSE[kind]), infer_types(u).codomain)
    return Comp(back, u), s


def _s_par_fuse(rng):
    from .corpus import random_space

    if rng.random() < 0.3:
        X = Seg(int(rng.integers(1, 4)))
        body = random_space(rng, 2)
        f, _, c = _rand(rng, body)
        g, _, _ = _rand(rng, c)
        return Comp(PowMap(X, g), PowMap(X, f)), Pow(X, body)
    n = int(rng.integers(1, 4))
    doms = [random_space(rng, 2) for _ in range(n)]
    fs, cs = [], []
    for d in doms:
        f, _, c = _rand(rng, d, 1)
        fs.append(f)
        cs.append(c)
    gs = [_rand(rng, c, 1)[0] for c in cs]
    return Comp(ParMap(tuple(gs)), ParMap(tuple(fs))), TupleSpace(tuple(doms))


def _s_par_id(rng):
    from .corpus import random_space

    if rng.random() < 0.3:
        s = random_space(rng, 2)
        X = Seg(int(rng.integers(1, 4)))
        return PowMap(X, Id(s)), Pow(X, s)
    doms = [random_space(rng, 2) for _ in range(int(rng.integers(1, 4)))]
    return ParMap(tuple(Id(d) for d in doms)), TupleSpace(tuple(doms))


def _s_contract_left(rng):
    from .corpus import _rv

    a, b, c, d, u = (int(k) for k in rng.integers(1, 4, 5))
    A, B, C, D, U = _rv(a), _rv(b), _rv(c), _rv(d), _rv(u)
    w = random_vector(TensorSpace(C, B), rng)
    v = random_vector(TensorSpace(D, C), rng)
    return Comp(ContractL(v, U), ContractL(w, U)), TensorSpace(B, U)


def _s_contract_right(rng):
    from .corpus import _rv

    a, b, c, left = (int(k) for k in rng.integers(1, 4, 4))
    A, B, C, L = _rv(a), _rv(b), _rv(c), _rv(left)
    w1 = random_vector(TensorSpace(A, B), rng)
    w2 = random_vector(TensorSpace(B, C), rng)
    return Comp(ContractR(w2, L), ContractR(w1, L)), TensorSpace(L, A)


def _s_red_fuse(rng):
    from .corpus import random_relation, random_space

    body = random_space(rng, 2)
    while True:
        X, Y, Z = (Seg(int(k)) for k in rng.integers(1, 5, 3))
        r1 = random_relation(rng, X, Y, 0.4)
        r2 = random_relation(rng, Y, Z, 0.4)
        if all(n <= 1 for n in r1.path_counts(r2).values()):
            return Comp(Red(r2, body), Red(r1, body)), Pow(X, body)


def _s_reassoc(rng):
    a, d, c = _rand(rng, None, 1)
    b, _, c2 = _rand(rng, c, 1)
    e, _, _ = _rand(rng, c2, 1)
    return Comp(Comp(e, b), a), d


RULES: tuple = (
    RewriteRule("id-left", _id_left, "id • f = f", _s_id_left),
    RewriteRule("id-right", _id_right, "f • id = f", _s_id_right),
    RewriteRule("zero-left", _zero_left, "0 • f = 0", _s_zero_left),
    RewriteRule("zero-right", _zero_right, "f • 0 = 0 by linearity of f", _s_zero_right),
    RewriteRule("plus-zero", _plus_zero, "0 is the unit of +", _s_plus_zero),
    RewriteRule("scale-zero", _scale_zero, "0·v = 0", _s_scale_zero),
    RewriteRule("scale-one", _scale_one, "1·v = v", _s_scale_one),
    RewriteRule("scale-fuse", _pairwise(_scale_fuse), "a·(b·v) = (ab)·v", _s_scale_fuse),
    RewriteRule(
        "unitary-cancel",
        _pairwise(_unitary_cancel),
        "a unitary followed by its inverse is the identity",
        _s_unitary_cancel,
    ),
    RewriteRule("par-fuse", _pairwise(_par_fuse), "(f×g)•(f'×g') = (f•f')×(g•g')", _s_par_fuse),
    RewriteRule("par-id", _par_id, "id × id = id", _s_par_id),
    RewriteRule(
        "contract-fuse-left",
        _pairwise(_contract_fuse_left),
        "(v∗) • (w∗) = ((v∗w)∗) by associativity of contraction",
        _s_contract_left,
    ),
    RewriteRule(
        "contract-fuse-right",
        _pairwise(_contract_fuse_right),
        "(∗w) • (∗w') = (∗(w'∗w)) by associativity of contraction",
        _s_contract_right,
    ),
    RewriteRule(
        "red-fuse",
        _pairwise(_red_fuse),
        "red_S • red_R = red_(R;S) when no pair is connected twice",
        _s_red_fuse,
    ),
    RewriteRule("reassoc", _reassoc, "(h • g) • f = h • (g • f)", _s_reassoc),
)
RULES_BY_NAME = {r.name: r for r in RULES}


# ---------------------------------------------------------------------------
# Strategy
# ---------------------------------------------------------------------------


def _children(t):
    if isinstance(t, Comp):
        return [t.g, t.f], lambda cs: Comp(cs[0], cs[1])
    if isinstance(t, PlusMap):
        return [t.f, t.g], lambda cs: PlusMap(cs[0], cs[1])
    if isinstance(t, ParMap):
        return list(t.parts), lambda cs: ParMap(tuple(cs), t.index)
    if isinstance(t, PowMap):
        return [t.f], lambda cs: PowMap(t.index, cs[0])
    if isinstance(t, Fanout):
        return list(t.parts), lambda cs: Fanout(tuple(cs), t.index, t.dom)
    return [], None


def _step(t, rules):
    """One leftmost-innermost rewrite, or ``None`` at a normal form."""
    kids, rebuild = _children(t)
    for i, k in enumerate(kids):
        out = _step(k, rules)
        if out is not None:
            new, name = out
            kids = list(kids)
            kids[i] = new
            return rebuild(kids), name
    for rule in rules:
        new = rule.match(t)
        if new is not None and new != t:
            return new, rule.name
    return None


def _prepare(f, dom):
    try:
        return annotate(f, dom)
    except MissingAnnotation:
        # Polymorphic input: rules that need spaces will decline.
        return f


def simplify_with_stats(
    f: LinTerm, dom: SpaceTerm | None = None, rules=RULES, budget: int | None = None
) -> tuple:
    """Returns ``(normal form, SimplifyStats)``."""
    t = _prepare(f, dom)
    stats = SimplifyStats(size_before=term_size(t))
    stats.budget = 10 * stats.size_before if budget is None else budget
    while True:
        out = _step(t, rules)
        if out is None:
            break
        if stats.steps >= stats.budget:
            stats.exhausted = True
            break
        t, name = out
        stats.steps += 1
        stats.fired[name] = stats.fired.get(name, 0) + 1
    stats.size_after = term_size(t)
    return t, stats


def simplify(f: LinTerm, dom: SpaceTerm | None = None) -> LinTerm:
    return simplify_with_stats(f, dom)[0]


# ---------------------------------------------------------------------------
# Soundness suite
# ---------------------------------------------------------------------------


@dataclass
class RuleReport:
    rule: str
    instances: int
    failures: int
    max_defect: float

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.instances > 0


def check_rule(rule: RewriteRule, instances: int = 50, seed: int = 0, tol: float = 1e-12) -> RuleReport:
    """Lower each random instance before and after one application of the
    rule at the root and compare the matrices."""
    from .oracle import lower_matrix

    rng = np.random.default_rng(seed)
    fails, worst, done = 0, 0.0, 0
    while done < instances:
        t, dom = rule.sample(rng)
        after = rule.match(t)
        if after is None:
            continue
        done += 1
        cod = infer_types(t, dom).codomain
        a = lower_matrix(t, dom, cod)
        try:
            b = lower_matrix(after, dom, cod)
            if not same_space(infer_types(after, dom).codomain, cod):
                raise TermTypeError("codomain changed")
        except TermTypeError:
            fails += 1
            continue
        scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
        defect = float(np.max(np.abs(a - b))) / scale if a.size else 0.0
        worst = max(worst, defect)
        if a.shape != b.shape or defect > tol:
            fails += 1
    return RuleReport(rule.name, done, fails, worst)


def rule_soundness_suite(instances: int = 50, seed: int = 0, tol: float = 1e-12) -> list:
    return [check_rule(r, instances, seed + i, tol) for i, r in enumerate(RULES)]


__all__ = [
    "RewriteRule",
    "RULES",
    "RULES_BY_NAME",
    "SimplifyStats",
    "RuleReport",
    "simplify",
    "simplify_with_stats",
    "check_rule",
    "rule_soundness_suite",
]
