import math

import numpy as np

from fretchet.corpus import funterm_corpus, linterm_corpus, named_cases, swell_chain, two_var_gradient
from fretchet.diff import affine
from fretchet.funterm import fun_size
from fretchet.linterm import term_size
from fretchet.report import loss_trace_csv, matrix_csv, plot_cost_sweep, plot_jacobian_check, plot_loss_trace, rows_to_csv
from fretchet.spaces import VScalar, VTuple, dim


def test_corpora_are_deterministic():
    assert funterm_corpus(20, seed=5) == funterm_corpus(20, seed=5)
    assert linterm_corpus(20, seed=5) == linterm_corpus(20, seed=5)
    assert funterm_corpus(20, seed=5) != funterm_corpus(20, seed=6)


def test_function_corpus_respects_size_limits():
    for c in funterm_corpus(200, seed=0):
        assert dim(c.domain) <= 6


def test_named_cases():
    names = {c.name for c in named_cases()}
    assert {"ln-sin", "two-var", "griewank", "swell-chain", "network-2-3-1"} <= names


def test_two_var_gradient_closed_form():
    assert two_var_gradient(2.0, 5.0) == (5.5, 2.0 - math.cos(5.0))


def test_swell_ratios():
    # Frozen ratios term_size(derivative) / size(term) along the chain.
    v = VTuple((VScalar(0.4), VScalar(0.7)))
    ratios = {k: term_size(affine(swell_chain(k), v).deriv) / fun_size(swell_chain(k)) for k in (5, 20, 40)}
    assert round(ratios[5], 4) == 1.2568
    assert round(ratios[20], 4) == 1.2315
    assert round(ratios[40], 4) == 1.2269


def test_csv_helpers():
    assert rows_to_csv(["a", "b"], [(1, 2)]) == "a,b\n1,2\n"
    assert loss_trace_csv([0.5, 0.25]).splitlines() == ["step,mean_loss", "0,0.5", "1,0.25"]
    assert matrix_csv(np.array([[1.0, 2.0]])) == "c1,c2\n1.0,2.0\n"


def test_figures_are_written(tmp_path):
    paths = [
        plot_loss_trace([1.0, 0.5, 0.1], tmp_path / "a" / "loss.png"),
        plot_jacobian_check(np.eye(2), np.eye(2) + 1e-9, tmp_path / "jac.png"),
        plot_cost_sweep([7, 14], [35, 70], [6, 6], [5, 5], tmp_path / "cost.png", 5),
    ]
    for p in paths:
        assert p.exists() and p.read_bytes()[:4] == b"\x89PNG"
