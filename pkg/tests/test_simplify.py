import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fretchet.corpus import linterm_corpus
from fretchet.linterm import Comp, Id, Red, ScaleMap, Unitary, annotate, infer_types, scan, term_size
from fretchet.oracle import lower_matrix
from fretchet.simplify import RULES, RULES_BY_NAME, check_rule, rule_soundness_suite, simplify, simplify_with_stats
from fretchet.spaces import R, Relation, Seg, TensorSpace, real_vector_space

R3 = real_vector_space(3)


def test_identity_elimination():
    out = simplify(Comp(Id(), scan(3)), R3)
    assert isinstance(out, Red) and out.rel == scan(3).rel


def test_scale_fusion():
    out = simplify(Comp(ScaleMap(2.0), ScaleMap(3.0)), R)
    assert isinstance(out, ScaleMap) and out.k == 6.0


def test_red_fusion():
    first = Red(Relation(Seg(2), Seg(1), ((1, 1), (2, 1))))
    second = Red(Relation(Seg(1), Seg(1), ((1, 1),)))
    out = simplify(Comp(second, first), real_vector_space(2))
    assert isinstance(out, Red)
    assert out.rel.pairs == ((1, 1), (2, 1))


def test_red_fusion_declines_on_repeated_paths():
    # scan ∘ scan sums some components twice; no single relation does that
    f = Comp(scan(3), scan(3))
    out = simplify(f, R3)
    np.testing.assert_allclose(lower_matrix(out, R3, R3), lower_matrix(f, R3, R3))
    assert not isinstance(out, Red)


def test_unitary_cancel():
    s = TensorSpace(R3, R)
    out = simplify(Comp(Unitary("ttranspose"), Unitary("ttranspose")), s)
    assert isinstance(out, Id)


def test_polymorphic_input_is_left_alone_where_types_are_needed():
    out = simplify(Comp(Id(), ScaleMap(1.0)))
    assert term_size(out) <= 3


@pytest.mark.parametrize("rule", RULES, ids=lambda r: r.name)
def test_rule_sound(rule):
    report = check_rule(rule, instances=50, seed=1, tol=1e-12)
    assert report.passed, report


def test_suite_covers_every_rule():
    names = {r.rule for r in rule_soundness_suite(instances=5)}
    assert names == set(RULES_BY_NAME)
    assert {"id-left", "contract-fuse-left", "red-fuse"} <= names


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_sound_idempotent_non_increasing(seed):
    (f, dom), = linterm_corpus(1, seed=seed, depth=6)
    cod = infer_types(f, dom).codomain
    out, stats = simplify_with_stats(f, dom)
    assert not stats.exhausted
    m = lower_matrix(f, dom, cod)
    np.testing.assert_allclose(lower_matrix(out, dom, cod), m, atol=1e-12 * max(1.0, np.abs(m).max(initial=0)))
    assert term_size(out) <= term_size(annotate(f, dom))
    assert simplify(out, dom) == out


def test_stats_record_fired_rules():
    _, stats = simplify_with_stats(Comp(Id(), Comp(ScaleMap(2.0), ScaleMap(3.0))), R)
    assert stats.fired.get("id-left") == 1
    assert stats.fired.get("scale-fuse") == 1
    assert stats.size_after < stats.size_before


def test_budget_stops_rewriting():
    f = Comp(Id(), Comp(Id(), Comp(Id(), ScaleMap(2.0))))
    _, stats = simplify_with_stats(f, R, budget=1)
    assert stats.exhausted and stats.steps == 1
