"""A k-layer feed-forward network written as one function term.

Layer ``i`` maps ``(x_i, W_i, b_i, W_{i+1}, b_{i+1}, ..., W_k, b_k, y)`` to
``(h(W_i ⋆ x_i + b_i), W_{i+1}, b_{i+1}, ..., y)``, passing the parameters
of later layers through by projection.  The loss ``(v, y) ↦ (v−y)⊙(v−y)``
closes the chain, so the whole network is a scalar-valued term on the big
parameter tuple and its gradient comes straight from :func:`gradient`.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .diff import gradient, vjp
from .errors import ShapeError
from .funterm import FComp, FLin, FPow, FunTerm, PrimOp, FPrim, bilin, eval_fun, fadd, fanout, fsub
from .linterm import Fanout, Id, Proj, dup
from .spaces import (
    Seg,
    TensorSpace,
    TupleSpace,
    VScalar,
    VTensor,
    VTuple,
    Vector,
    basis,
    compact,
    components,
    real_vector_space,
    scalar_value,
    to_coords,
    vec,
    vec_add,
    vec_scale,
)


@dataclass(frozen=True)
class NetworkSpec:
    """Layer widths ``m_0, ..., m_k``; ``activation=None`` means identity."""

    dims: tuple
    activation: PrimOp | None = field(default_factory=lambda: PrimOp("tanh"))

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) < 2:
            raise ShapeError("a network needs at least one layer (two widths)")
        if any(d < 1 for d in self.dims):
            raise ShapeError(f"layer widths must be positive, got {self.dims}")

    @property
    def depth(self) -> int:
        return len(self.dims) - 1

    def weight_space(self, i: int) -> TensorSpace:
        return TensorSpace(real_vector_space(self.dims[i]), real_vector_space(self.dims[i - 1]))

    def param_space(self) -> TupleSpace:
        """``(x, W_1, b_1, ..., W_k, b_k, y)``."""
        blocks = [real_vector_space(self.dims[0])]
        for i in range(1, self.depth + 1):
            blocks += [self.weight_space(i), real_vector_space(self.dims[i])]
        blocks.append(real_vector_space(self.dims[-1]))
        return TupleSpace(tuple(blocks))


def _proj(i):
    return FLin(Proj(i))


def build_layer(i: int, spec: NetworkSpec) -> FunTerm:
    k = spec.depth
    if not 1 <= i <= k:
        raise ShapeError(f"layer index {i} outside 1..{k}")
    n_in = 2 * (k + 2 - i)
    act = FLin(Id()) if spec.activation is None else FPrim(spec.activation)
    affine_part = fadd(FComp(bilin("matvec"), FLin(Fanout((Proj(2), Proj(1))))), _proj(3))
    head = FComp(FPow(Seg(spec.dims[i]), act), affine_part)
    return fanout(head, *(_proj(j) for j in range(4, n_in + 1)))


def build_loss() -> FunTerm:
    """``(v, y) ↦ (v − y) ⊙ (v − y)`` as ``⊙ ∘ dup ∘ (proj₁ − proj₂)``."""
    return FComp(bilin("dot"), FComp(FLin(dup()), fsub(_proj(1), _proj(2))))


def build_network(spec: NetworkSpec) -> FunTerm:
    t: FunTerm = build_layer(1, spec)
    for i in range(2, spec.depth + 1):
        t = FComp(build_layer(i, spec), t)
    return FComp(build_loss(), t)


# ---------------------------------------------------------------------------
# Parameters
# ---------------------------------------------------------------------------


def weight_tensor(rows) -> VTensor:
    """``W = Σ_r e_r ⊗ row_r`` from a nested sequence of rows."""
    rows = [list(map(float, r)) for r in rows]
    m, n = len(rows), len(rows[0])
    space = TensorSpace(real_vector_space(m), real_vector_space(n))
    return VTensor(space, tuple((1.0, basis(space.left, r), vec(*rows[r])) for r in range(m)))


def weight_matrix(W: Vector) -> np.ndarray:
    s = W.space if isinstance(W, VTensor) else None
    if s is None:
        raise ShapeError("weights must be a tensor")
    from .spaces import dim

    return to_coords(W).reshape(dim(s.left), dim(s.right))


def pack_params(spec: NetworkSpec, x, weights, biases, y) -> VTuple:
    blocks: list = [vec(*x)]
    for W, b in zip(weights, biases):
        blocks += [W if isinstance(W, Vector) else weight_tensor(W), vec(*b)]
    blocks.append(vec(*y))
    return VTuple(tuple(blocks))


def init_params(spec: NetworkSpec, rng: np.random.Generator, x=None, y=None) -> VTuple:
    """Weights uniform in ``[-0.5, 0.5]``, biases zero."""
    x = [0.0] * spec.dims[0] if x is None else x
    y = [0.0] * spec.dims[-1] if y is None else y
    weights, biases = [], []
    for i in range(1, spec.depth + 1):
        weights.append(rng.uniform(-0.5, 0.5, (spec.dims[i], spec.dims[i - 1])))
        biases.append([0.0] * spec.dims[i])
    return pack_params(spec, x, weights, biases, y)


def with_sample(p: VTuple, x, y) -> VTuple:
    items = list(p.items)
    items[0] = vec(*x)
    items[-1] = vec(*y)
    return VTuple(tuple(items))


def layer_blocks(p: VTuple) -> list:
    """``[(W_1, b_1), ..., (W_k, b_k)]``."""
    mid = p.items[1:-1]
    return [(mid[j], mid[j + 1]) for j in range(0, len(mid), 2)]


# ---------------------------------------------------------------------------
# Forward pass, gradient and training
# ---------------------------------------------------------------------------


def dense_forward(spec: NetworkSpec, p: VTuple) -> np.ndarray:
    """Plain numpy forward pass, independent of the term machinery."""
    act = (lambda z: z) if spec.activation is None else np.vectorize(spec.activation.value)
    a = to_coords(p.items[0])
    for W, b in layer_blocks(p):
        a = act(weight_matrix(W) @ a + to_coords(b))
    return a


def network_loss(spec: NetworkSpec, p: VTuple, net: FunTerm | None = None) -> float:
    net = build_network(spec) if net is None else net
    return scalar_value(eval_fun(net, p))


def nn_gradient(spec: NetworkSpec, p: VTuple, net: FunTerm | None = None) -> VTuple:
    """Gradient over every block of the parameter tuple."""
    net = build_network(spec) if net is None else net
    return gradient(net, p)


def nn_gradient_vjp(spec: NetworkSpec, p: VTuple) -> Vector:
    return vjp(build_network(spec), p, VScalar(1.0))


@dataclass(frozen=True)
class TrainResult:
    losses: tuple
    params: VTuple


def train(
    spec: NetworkSpec,
    dataset,
    lr: float,
    steps: int,
    seed: int = 0,
) -> TrainResult:
    """Full-batch gradient descent on the mean loss.

    ``losses[0]`` is the initial mean loss and ``losses[s]`` the mean loss
    after ``s`` updates.  Only the ``W`` and ``b`` blocks move.
    """
    if lr < 0:
        raise ValueError("learning rate must be non-negative")
    data = [(list(x), list(y)) for x, y in dataset]
    if not data:
        raise ValueError("empty dataset")
    net = build_network(spec)
    p = init_params(spec, np.random.default_rng(seed), *data[0])
    losses = []
    for step in range(steps + 1):
        total = 0.0
        acc = None
        for x, y in data:
            q = with_sample(p, x, y)
            total += network_loss(spec, q, net)
            if step < steps:
                g = nn_gradient(spec, q, net)
                acc = g if acc is None else vec_add(acc, g)
        losses.append(total / len(data))
        if step == steps:
            break
        grad = vec_scale(1.0 / len(data), acc)
        items = list(p.items)
        for j in range(1, len(items) - 1):
            items[j] = compact(vec_add(items[j], vec_scale(-lr, components(grad)[j])))
        p = VTuple(tuple(items))
    return TrainResult(tuple(losses), p)


# ---------------------------------------------------------------------------
# Data
# ---------------------------------------------------------------------------


def load_dataset(path, n_in: int, n_out: int) -> list:
    """CSV rows of ``n_in`` inputs then ``n_out`` targets; a header row whose
    first cell is not a number is skipped."""
    out = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                vals = [float(c) for c in row]
            except ValueError:
                if lineno == 1:
                    continue
                raise ValueError(f"{path}:{lineno}: non-numeric cell") from None
            if len(vals) != n_in + n_out:
                raise ValueError(f"{path}:{lineno}: expected {n_in + n_out} columns, got {len(vals)}")
            out.append((vals[:n_in], vals[n_in:]))
    return out


def toy_dataset_path() -> Path:
    return Path(str(resources.files("fretchet") / "data" / "toy8.csv"))


def toy_dataset() -> list:
    return load_dataset(toy_dataset_path(), 2, 1)


__all__ = [
    "NetworkSpec",
    "TrainResult",
    "build_layer",
    "build_loss",
    "build_network",
    "weight_tensor",
    "weight_matrix",
    "pack_params",
    "init_params",
    "with_sample",
    "layer_blocks",
    "dense_forward",
    "network_loss",
    "nn_gradient",
    "nn_gradient_vjp",
    "train",
    "load_dataset",
    "toy_dataset",
    "toy_dataset_path",
]
