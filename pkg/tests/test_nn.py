import numpy as np
import pytest

from fretchet.adjoint import adjoint
from fretchet.diff import affine
from fretchet.errors import ShapeError
from fretchet.funterm import eval_fun
from fretchet.linterm import apply
from fretchet.nn import (
    NetworkSpec,
    build_layer,
    build_loss,
    build_network,
    dense_forward,
    init_params,
    layer_blocks,
    load_dataset,
    network_loss,
    nn_gradient,
    nn_gradient_vjp,
    pack_params,
    toy_dataset,
    train,
    weight_matrix,
    weight_tensor,
    with_sample,
)
from fretchet.oracle import fd_jacobian
from fretchet.spaces import (
    VScalar,
    VTensor,
    VTuple,
    components,
    from_coords,
    same_space,
    scalar_value,
    shape,
    to_coords,
    vec,
)

# Frozen from a run of the reference configuration (2-4-1, lr 0.1, 200 steps,
# seed 42); an independent numpy finite-difference descent reproduced the
# same trace to 4e-13.
INITIAL_LOSS = 0.08679773954793747
FINAL_LOSS = 0.00022029486786795133


def test_identity_layer_passes_input_through():
    spec = NetworkSpec((2, 2), activation=None)
    p = pack_params(spec, [0.3, -1.2], [np.eye(2)], [[0.0, 0.0]], [0.0, 0.0])
    out = eval_fun(build_layer(1, spec), p)
    np.testing.assert_allclose(to_coords(components(out)[0]), [0.3, -1.2])


def test_tanh_layer_at_origin():
    spec = NetworkSpec((2, 1))
    p = pack_params(spec, [0.0, 0.0], [[[1.0, 1.0]]], [[0.0]], [0.0])
    out = eval_fun(build_layer(1, spec), p)
    assert to_coords(components(out)[0]) == pytest.approx([0.0])


def test_layer_matches_dense_formula():
    spec = NetworkSpec((3, 4, 2))
    rng = np.random.default_rng(0)
    p = init_params(spec, rng, rng.normal(size=3), rng.normal(size=2))
    items = list(p.items)
    items[2] = vec(*rng.normal(size=4))  # nonzero bias
    p = VTuple(tuple(items))
    out = eval_fun(build_layer(1, spec), p)
    W, b = layer_blocks(p)[0]
    expected = np.tanh(weight_matrix(W) @ to_coords(p.items[0]) + to_coords(b))
    np.testing.assert_allclose(to_coords(components(out)[0]), expected, atol=1e-14)
    # later parameters and the target are passed through untouched
    assert components(out)[1:] == p.items[3:]


def test_loss():
    loss = build_loss()
    assert scalar_value(eval_fun(loss, VTuple((vec(1, 2), vec(1, 2))))) == 0.0
    assert scalar_value(eval_fun(loss, VTuple((vec(1, 2), vec(0, 0))))) == 5.0


def test_network_output_matches_dense_forward():
    spec = NetworkSpec((2, 3, 1))
    rng = np.random.default_rng(1)
    p = init_params(spec, rng, [0.4, -0.2], [0.3])
    v = dense_forward(spec, p)
    assert network_loss(spec, p) == pytest.approx(float(np.sum((v - 0.3) ** 2)), abs=1e-15)


def test_gradient_at_the_origin():
    spec = NetworkSpec((2, 3, 1))
    p = init_params(spec, np.random.default_rng(0))
    g = nn_gradient(spec, p)
    np.testing.assert_array_equal(to_coords(components(g)[-1]), [0.0])


def test_gradient_wrt_target():
    spec = NetworkSpec((2, 3, 1))
    rng = np.random.default_rng(2)
    p = init_params(spec, rng, [0.5, 0.1], [0.7])
    v = dense_forward(spec, p)
    np.testing.assert_allclose(to_coords(components(nn_gradient(spec, p))[-1]), -2 * (v - 0.7), atol=1e-14)


def test_gradient_against_finite_differences():
    spec = NetworkSpec((2, 3, 1))
    net = build_network(spec)
    rng = np.random.default_rng(7)
    for _ in range(5):
        p = init_params(spec, rng, rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 1))
        np.testing.assert_allclose(to_coords(nn_gradient(spec, p, net)), fd_jacobian(net, p, 1e-4)[0], rtol=1e-4, atol=1e-8)


def test_three_ways_to_backpropagate_agree():
    spec = NetworkSpec((2, 3, 1))
    rng = np.random.default_rng(3)
    p = init_params(spec, rng, [0.2, -0.9], [0.4])
    a = to_coords(nn_gradient(spec, p))
    b = to_coords(apply(adjoint(affine(build_network(spec), p).deriv), VScalar(1.0)))
    c = to_coords(nn_gradient_vjp(spec, p))
    np.testing.assert_allclose(a, b, atol=1e-10)
    np.testing.assert_allclose(a, c, atol=1e-10)


def test_weight_forms_agree():
    spec = NetworkSpec((2, 3, 1))
    rng = np.random.default_rng(5)
    p = init_params(spec, rng, [0.1, 0.2], [0.0])
    items = list(p.items)
    W = items[1]
    items[1] = from_coords(W.space, to_coords(W))  # dense conversion
    q = VTuple(tuple(items))
    assert isinstance(W, VTensor)
    assert network_loss(spec, q) == pytest.approx(network_loss(spec, p), abs=1e-12)


def test_spec_validation():
    with pytest.raises(ShapeError):
        NetworkSpec((2,))
    with pytest.raises(ShapeError):
        NetworkSpec((2, 0, 1))
    with pytest.raises(ShapeError):
        build_layer(3, NetworkSpec((2, 3, 1)))
    spec = NetworkSpec((2, 3, 1))
    assert same_space(shape(init_params(spec, np.random.default_rng(0))), spec.param_space())


def test_zero_learning_rate_keeps_loss_constant():
    r = train(NetworkSpec((2, 3, 1)), toy_dataset(), 0.0, 3, 0)
    assert len(r.losses) == 4 and len(set(r.losses)) == 1


def test_single_step_is_gradient_descent():
    spec = NetworkSpec((2, 3, 1))
    data = toy_dataset()
    lr = 0.05
    start = init_params(spec, np.random.default_rng(1), *data[0])
    g = sum(to_coords(nn_gradient(spec, with_sample(start, x, y))) for x, y in data) / len(data)
    expected = to_coords(start) - lr * g
    after = to_coords(train(spec, data, lr, 1, 1).params)
    # x and y slots are not trained
    n_x, n_y = 2, 1
    np.testing.assert_allclose(after[n_x:-n_y], expected[n_x:-n_y], atol=1e-14)


def test_reference_training_run():
    r = train(NetworkSpec((2, 4, 1)), toy_dataset(), 0.1, 200, 42)
    assert len(r.losses) == 201
    assert r.losses[0] == pytest.approx(INITIAL_LOSS, rel=1e-12)
    assert r.losses[-1] == pytest.approx(FINAL_LOSS, rel=1e-9)
    assert r.losses[-1] < 0.1 * r.losses[0]


def test_dataset_loading(tmp_path):
    data = toy_dataset()
    assert len(data) == 8 and all(len(x) == 2 and len(y) == 1 for x, y in data)
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2\n")
    with pytest.raises(ValueError, match="expected 3 columns"):
        load_dataset(bad, 2, 1)
    bad.write_text("1,2,3\nx,2,3\n")
    with pytest.raises(ValueError, match="non-numeric"):
        load_dataset(bad, 2, 1)


def test_weight_tensor_rows():
    W = weight_tensor([[1, 2], [3, 4], [5, 6]])
    np.testing.assert_array_equal(weight_matrix(W), [[1, 2], [3, 4], [5, 6]])
    with pytest.raises(ShapeError):
        weight_matrix(vec(1, 2))
