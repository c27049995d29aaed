"""Figures and delimited tables for the CLI report paths.

Matplotlib runs on the Agg backend, so figures only ever go to files.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 3.8),
    "figure.dpi": 110,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def loss_trace_csv(losses) -> str:
    return rows_to_csv(["step", "mean_loss"], [(i, repr(float(x))) for i, x in enumerate(losses)])


def matrix_csv(m: np.ndarray) -> str:
    return rows_to_csv([f"c{j + 1}" for j in range(m.shape[1])], [[repr(float(x)) for x in row] for row in m])


def plot_loss_trace(losses, path, title="Gradient descent") -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.semilogy(np.arange(len(losses)), losses, color="tab:blue", lw=1.5)
        ax.set_xlabel("step")
        ax.set_ylabel("mean loss")
        ax.set_title(title)
        return _save(fig, path)


def _matrix_axes(ax, m, title):
    ax.set_title(title)
    ax.grid(False)
    ax.set_xticks(range(m.shape[1]), [str(j + 1) for j in range(m.shape[1])])
    ax.set_yticks(range(m.shape[0]), [str(i + 1) for i in range(m.shape[0])])
    ax.set_xlabel("input coordinate")


def plot_jacobian_check(symbolic: np.ndarray, numeric: np.ndarray, path) -> Path:
    """Symbolic and finite-difference Jacobians side by side, plus their
    absolute difference."""
    diff = np.abs(symbolic - numeric)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, 3, figsize=(10.0, 3.4), layout="constrained")
        vmax = max(1e-300, float(np.max(np.abs(numeric))) if numeric.size else 1.0)
        for ax, m, title in ((axes[0], symbolic, "symbolic"), (axes[1], numeric, "finite difference")):
            im = ax.imshow(m, cmap="RdBu_r", vmin=-vmax, vmax=vmax, aspect="auto")
            _matrix_axes(ax, m, title)
        axes[0].set_ylabel("output coordinate")
        fig.colorbar(im, ax=axes[:2], shrink=0.8)
        im = axes[2].imshow(diff, cmap="viridis", aspect="auto")
        _matrix_axes(axes[2], diff, "|difference|")
        fig.colorbar(im, ax=axes[2], shrink=0.8)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path)
        plt.close(fig)
        return path


def plot_cost_sweep(ms, dense, decomposed, build, path, n: int) -> Path:
    """Multiplication counts for the rank-one derivative as ``m`` grows."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(ms, dense, "o-", label="dense Jacobian apply (m·n)")
        ax.plot(ms, decomposed, "s-", label="rank-one term apply (n+1)")
        ax.plot(ms, build, "^--", label="building the rank-one term (n)")
        ax.set_xlabel("m (output dimension)")
        ax.set_ylabel("scalar multiplications")
        ax.set_title(f"n = {n}")
        ax.legend(frameon=False)
        return _save(fig, path)


__all__ = [
    "rows_to_csv",
    "loss_trace_csv",
    "matrix_csv",
    "plot_loss_trace",
    "plot_jacobian_check",
    "plot_cost_sweep",
]
