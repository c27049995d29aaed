"""The nine acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, shown in the pytest terminal summary
and printed when the file is run directly (``python3 tests/test_acceptance.py``).
"""

import math
import time

import numpy as np

from fretchet.adjoint import adjoint
from fretchet.corpus import (
    funterm_corpus,
    linterm_corpus,
    named_cases,
    swell_chain,
    two_var_example,
    two_var_gradient,
    unitary_test_space,
)
from fretchet.diff import affine, affine_adj, gradient
from fretchet.funterm import fun_size
from fretchet.linterm import UNITARIES, UNITARY_INVERSE, Unitary, annotate, apply, infer_types, term_size
from fretchet.nn import NetworkSpec, build_network, init_params, nn_gradient, toy_dataset, train
from fretchet.oracle import fd_jacobian, griewank_counts, lower_matrix, matrices_close
from fretchet.simplify import rule_soundness_suite, simplify_with_stats
from fretchet.spaces import VScalar, VTuple, inner, norm, random_vector, shape, to_coords


def _scaled_defect(a, b):
    """max |a − b| relative to max(1, max |b|)."""
    if a.shape != b.shape:
        return math.inf
    if not a.size:
        return 0.0
    return float(np.max(np.abs(a - b))) / max(1.0, float(np.max(np.abs(b))))


def _report(record, n, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} ({detail})"
    record(line)
    return ok


def _fun_cases():
    return funterm_corpus(200, seed=2024) + named_cases()


# ---------------------------------------------------------------------------


def test_1_two_variable_gradient(record_criterion):
    rng = np.random.default_rng(11)
    t = two_var_example()
    start = time.perf_counter()
    worst = 0.0
    for _ in range(20):
        x1, x2 = rng.uniform(0.1, 10.0), rng.uniform(-5.0, 5.0)
        g = to_coords(gradient(t, VTuple((VScalar(x1), VScalar(x2)))))
        worst = max(worst, float(np.max(np.abs(g - np.array(two_var_gradient(x1, x2))))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 1.0
    _report(record_criterion, 1, "gradient of ln x1 + x1·x2 − sin x2", ok, f"max abs err {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_2_finite_difference_corpus(record_criterion):
    start = time.perf_counter()
    cases = _fun_cases()
    bad = []
    for c in cases:
        res = affine(c.term, c.point)
        m = lower_matrix(res.deriv, c.domain, shape(res.value))
        if not matrices_close(m, fd_jacobian(c.term, c.point, 1e-4), 1e-5):
            bad.append(c.name)
    elapsed = time.perf_counter() - start
    ok = not bad and len(cases) >= 200 and elapsed < 30.0
    _report(record_criterion, 2, "derivative matrix vs central differences", ok, f"{len(cases)} terms, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad


def test_3_adjoint_is_transpose(record_criterion):
    start = time.perf_counter()
    corpus = linterm_corpus(200, seed=77)
    rng = np.random.default_rng(5)
    worst_matrix, worst_law = 0.0, 0.0
    for f, dom in corpus:
        cod = infer_types(f, dom).codomain
        fa = adjoint(f)
        worst_matrix = max(worst_matrix, _scaled_defect(lower_matrix(fa, cod, dom), lower_matrix(f, dom, cod).T))
        for _ in range(100):
            v, w = random_vector(dom, rng), random_vector(cod, rng)
            worst_law = max(worst_law, abs(inner(apply(f, v), w) - inner(v, apply(fa, w))))
    elapsed = time.perf_counter() - start
    ok = worst_matrix <= 1e-12 and worst_law <= 1e-10 and elapsed < 30.0
    _report(
        record_criterion,
        3,
        "adjoint equals transpose",
        ok,
        f"{len(corpus)} terms, matrix defect {worst_matrix:.1e}, inner-product defect {worst_law:.1e}, {elapsed:.1f}s",
    )
    assert ok


def test_4_reverse_equals_adjoint_of_forward(record_criterion):
    worst = 0.0
    cases = _fun_cases()
    for c in cases:
        fwd = affine(c.term, c.point)
        rev = affine_adj(c.term, c.point)
        cod = shape(fwd.value)
        m = lower_matrix(fwd.deriv, c.domain, cod)
        worst = max(worst, _scaled_defect(lower_matrix(rev.adj_deriv, cod, c.domain), m.T))
    ok = worst <= 1e-12
    _report(record_criterion, 4, "reverse mode equals adjoint of forward mode", ok, f"{len(cases)} terms, defect {worst:.1e}")
    assert ok


def test_5_griewank_counts(record_criterion):
    c = griewank_counts(7, 5)
    c14 = griewank_counts(14, 5)
    ok = (
        c.dense_apply == 35
        and c.decomposed_apply == 6
        and c.build == 5
        and c14.term_size == c.term_size
    )
    _report(
        record_criterion,
        5,
        "multiplication counts for b·sin(a⊙x), m=7, n=5",
        ok,
        f"dense {c.dense_apply}, decomposed {c.decomposed_apply}, build {c.build}, "
        f"term size {c.term_size} at m=7 and {c14.term_size} at m=14",
    )
    assert ok


def test_6_no_expression_swell(record_criterion):
    v = VTuple((VScalar(0.4), VScalar(0.7)))
    ratios = {}
    for k in (5, 20):
        t = swell_chain(k)
        ratios[k] = term_size(affine(t, v).deriv) / fun_size(t)
    ok = ratios[20] <= 1.1 * ratios[5]
    _report(record_criterion, 6, "derivative size stays proportional to term size", ok, f"ratio {ratios[5]:.3f} at k=5, {ratios[20]:.3f} at k=20")
    assert ok


def test_7_network_backprop_and_training(record_criterion):
    start = time.perf_counter()
    spec = NetworkSpec((2, 3, 1))
    rng = np.random.default_rng(3)
    grad_ok = True
    for _ in range(10):
        p = init_params(spec, rng, rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 1))
        g = to_coords(nn_gradient(spec, p))
        fd = fd_jacobian(build_network(spec), p, 1e-4)[0]
        grad_ok &= matrices_close(g[None, :], fd[None, :], 1e-4)
    result = train(NetworkSpec((2, 4, 1)), toy_dataset(), 0.1, 200, 42)
    ratio = result.losses[-1] / result.losses[0]
    elapsed = time.perf_counter() - start
    ok = grad_ok and ratio < 0.1 and elapsed < 10.0
    _report(
        record_criterion,
        7,
        "network gradient vs finite differences, training loss drop",
        ok,
        f"gradients {'match' if grad_ok else 'differ'}, final/initial loss {ratio:.4f}, {elapsed:.1f}s",
    )
    assert ok


def test_8_simplify_soundness(record_criterion):
    reports = rule_soundness_suite(instances=50, tol=1e-12)
    rules_ok = all(r.passed for r in reports)
    terms = [f for f, _ in linterm_corpus(200, seed=8, depth=6)]
    doms = [d for _, d in linterm_corpus(200, seed=8, depth=6)]
    for c in _fun_cases()[:100]:
        terms.append(affine(c.term, c.point).deriv)
        doms.append(c.domain)
    idempotent = shrinking = within_budget = True
    for f, d in zip(terms, doms):
        out, stats = simplify_with_stats(f, d)
        within_budget &= not stats.exhausted
        shrinking &= term_size(out) <= term_size(annotate(f, d))
        idempotent &= simplify_with_stats(out, d)[0] == out
    ok = rules_ok and idempotent and shrinking and within_budget
    failed = [r.rule for r in reports if not r.passed]
    _report(
        record_criterion,
        8,
        "rewrite rules sound, simplify idempotent and non-increasing",
        ok,
        f"{len(reports)} rules x 50 instances, failing rules {failed or 'none'}, {len(terms)} corpus terms",
    )
    assert ok


def test_9_unitaries(record_criterion):
    rng = np.random.default_rng(9)
    worst = {"isometry": 0.0, "inverse": 0.0, "adjoint": 0.0}
    for kind in UNITARIES:
        for _ in range(100):
            s = unitary_test_space(kind, rng)
            u = annotate(Unitary(kind), s)
            cod = infer_types(u).codomain
            inv = annotate(Unitary(UNITARY_INVERSE[kind]), cod)
            v, w = random_vector(s, rng), random_vector(cod, rng)
            uv = apply(u, v)
            worst["isometry"] = max(worst["isometry"], abs(norm(uv) - norm(v)))
            worst["inverse"] = max(
                worst["inverse"],
                float(np.max(np.abs(to_coords(apply(inv, uv)) - to_coords(v)))),
                float(np.max(np.abs(to_coords(apply(u, apply(inv, w))) - to_coords(w)))),
            )
            adj_w = apply(adjoint(u), w)
            worst["adjoint"] = max(
                worst["adjoint"],
                float(np.max(np.abs(to_coords(adj_w) - to_coords(apply(inv, w))))),
                abs(inner(uv, w) - inner(v, adj_w)),
            )
    ok = all(x <= 1e-12 for x in worst.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    _report(record_criterion, 9, f"all {len(UNITARIES)} unitaries", ok, detail)
    assert ok


if __name__ == "__main__":
    import sys

    status = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn(print)
            except AssertionError:
                status = 1
    sys.exit(status)
