import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chartlab import numerics as nm


def rng(seed=0):
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# backward
# ---------------------------------------------------------------------------

def test_backward_square():
    # f(x) = x*x at x=3 -> gradient 6
    x = nm.param("x", 3.0)
    loss = nm.mul(x, x)
    grads = nm.backward(loss)
    assert grads["x"] == pytest.approx(6.0)


def test_backward_sum_of_softmax_is_zero():
    x = nm.param("x", rng(1).normal(size=7))
    loss = nm.reduce_sum(nm.softmax(x))
    grads = nm.backward(loss)
    np.testing.assert_allclose(grads["x"], np.zeros(7), atol=1e-12)


def test_backward_rejects_non_scalar():
    x = nm.param("x", np.ones(3))
    with pytest.raises(nm.NumericsError):
        nm.backward(nm.mul(x, 2.0))


def test_backward_reused_node_accumulates():
    x = nm.param("x", 2.0)
    y = nm.mul(x, x)  # x reused -> grads accumulate
    loss = nm.add(y, x)
    grads = nm.backward(loss)
    assert grads["x"] == pytest.approx(5.0)


def test_mlp_gradient_matches_finite_differences():
    r = rng(7)
    params = {
        "w1": r.normal(size=(5, 8)) * 0.5,
        "b1": r.normal(size=(8,)) * 0.1,
        "w2": r.normal(size=(8, 6)) * 0.5,
        "b2": r.normal(size=(6,)) * 0.1,
        "w3": r.normal(size=(6, 3)) * 0.5,
    }
    x = r.normal(size=(4, 5))

    def loss_fn(p):
        h1 = nm.gelu(nm.add(nm.matmul(nm.constant(x), p["w1"]), p["b1"]))
        h2 = nm.tanh(nm.add(nm.matmul(h1, p["w2"]), p["b2"]))
        logits = nm.matmul(h2, p["w3"])
        return nm.reduce_mean(nm.cross_entropy_rows(logits, [0, 1, 2, 0]))

    err = nm.finite_diff_check(loss_fn, params, step=1e-5)
    assert err < 1e-4


# ---------------------------------------------------------------------------
# finite_diff_check
# ---------------------------------------------------------------------------

def test_finite_diff_exact_for_linear():
    a = rng(2).normal(size=6)

    def loss_fn(p):
        return nm.reduce_sum(nm.mul(p["x"], nm.constant(a)))

    err = nm.finite_diff_check(loss_fn, {"x": rng(3).normal(size=6)}, step=1e-5)
    assert err < 1e-10


def test_finite_diff_constant_function():
    def loss_fn(p):
        return nm.constant(4.25) + nm.reduce_sum(nm.mul(p["x"], 0.0))

    err = nm.finite_diff_check(loss_fn, {"x": np.array([1.0, 2.0])}, step=1e-5)
    assert err == 0.0


def test_finite_diff_detects_nondeterminism():
    state = {"n": 0}

    def loss_fn(p):
        state["n"] += 1
        return nm.mul(p["x"], float(state["n"]))

    with pytest.raises(nm.NumericsError):
        nm.finite_diff_check(loss_fn, {"x": np.array(1.0)}, step=1e-5)


@pytest.mark.parametrize("op_name", ["gelu", "tanh", "softmax", "log_softmax"])
def test_primitive_gradients_vs_finite_differences(op_name):
    op = getattr(nm, op_name)

    def loss_fn(p):
        out = op(p["x"])
        return nm.reduce_sum(nm.mul(out, nm.constant(weights)))

    r = rng(11)
    weights = r.normal(size=9)
    err = nm.finite_diff_check(loss_fn, {"x": r.normal(size=9)}, step=1e-5)
    assert err < 1e-4


def test_layer_norm_gradient():
    r = rng(12)
    params = {
        "x": r.normal(size=(3, 6)),
        "g": 1.0 + 0.1 * r.normal(size=6),
        "b": 0.1 * r.normal(size=6),
    }
    weights = r.normal(size=(3, 6))

    def loss_fn(p):
        return nm.reduce_sum(nm.mul(nm.layer_norm(p["x"], p["g"], p["b"]), nm.constant(weights)))

    assert nm.finite_diff_check(loss_fn, params, step=1e-5) < 1e-4


def test_gather_and_concat_gradients():
    r = rng(13)
    params = {"table": r.normal(size=(5, 4)), "extra": r.normal(size=(2, 4))}
    weights = r.normal(size=(5, 4))

    def loss_fn(p):
        picked = nm.gather_rows(p["table"], [0, 2, 2])
        stacked = nm.concat_rows([picked, p["extra"]])
        return nm.reduce_sum(nm.mul(stacked, nm.constant(weights)))

    assert nm.finite_diff_check(loss_fn, params, step=1e-5) < 1e-4


def test_slice_cols_gradient():
    r = rng(14)
    weights = r.normal(size=(3, 2))

    def loss_fn(p):
        return nm.reduce_sum(nm.mul(nm.slice_cols(p["x"], 1, 3), nm.constant(weights)))

    assert nm.finite_diff_check(loss_fn, {"x": r.normal(size=(3, 5))}, step=1e-5) < 1e-4


# ---------------------------------------------------------------------------
# softmax / cross entropy
# ---------------------------------------------------------------------------

def test_cross_entropy_uniform_logits():
    loss = nm.softmax_cross_entropy(nm.constant(np.zeros(4)), 0)
    assert float(loss.value) == pytest.approx(math.log(4.0), abs=1e-12)


def test_cross_entropy_two_logits():
    # logits [2, 0], target 0 -> ln(1 + e^-2)
    loss = nm.softmax_cross_entropy(nm.constant([2.0, 0.0]), 0)
    assert float(loss.value) == pytest.approx(math.log(1.0 + math.exp(-2.0)), abs=1e-12)


def test_cross_entropy_saturated():
    loss = nm.softmax_cross_entropy(nm.constant([50.0, 0.0, 0.0]), 0)
    assert float(loss.value) < 1e-9


def test_cross_entropy_target_out_of_range():
    with pytest.raises(nm.NumericsError):
        nm.softmax_cross_entropy(nm.constant([1.0, 2.0]), 2)


def test_cross_entropy_rows_matches_single_row():
    r = rng(21)
    logits = r.normal(size=(4, 6))
    targets = [1, 0, 5, 3]
    batched = nm.cross_entropy_rows(nm.constant(logits), targets).value
    singles = [float(nm.softmax_cross_entropy(nm.constant(row), t).value)
               for row, t in zip(logits, targets)]
    np.testing.assert_allclose(batched, singles, rtol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-30, 30), min_size=2, max_size=12))
def test_softmax_rows_sum_to_one(values):
    out = nm.softmax(nm.constant(values)).value
    assert (out >= 0).all()
    assert abs(out.sum() - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# l2_normalize_rows
# ---------------------------------------------------------------------------

def test_l2_normalize_basic():
    out = nm.l2_normalize_rows(nm.constant([[3.0, 4.0]])).value
    np.testing.assert_allclose(out, [[0.6, 0.8]], rtol=1e-15)


def test_l2_normalize_unit_row_unchanged():
    row = np.array([[1.0, 0.0, 0.0]])
    out = nm.l2_normalize_rows(nm.constant(row)).value
    np.testing.assert_allclose(out, row, atol=1e-12)


def test_l2_normalize_random_norms():
    m = rng(5).normal(size=(8, 16))
    out = nm.l2_normalize_rows(nm.constant(m)).value
    norms = np.linalg.norm(out, axis=1)
    assert np.all(np.abs(norms - 1.0) < 1e-6)


def test_l2_normalize_idempotent():
    m = rng(6).normal(size=(4, 5))
    once = nm.l2_normalize_rows(nm.constant(m)).value
    twice = nm.l2_normalize_rows(nm.constant(once)).value
    np.testing.assert_allclose(twice, once, atol=1e-12)


def test_l2_normalize_zero_row_rejected():
    with pytest.raises(nm.NumericsError):
        nm.l2_normalize_rows(nm.constant([[0.0, 0.0], [1.0, 1.0]]))


def test_l2_normalize_gradient():
    r = rng(23)
    weights = r.normal(size=(3, 4))

    def loss_fn(p):
        return nm.reduce_sum(nm.mul(nm.l2_normalize_rows(p["x"]), nm.constant(weights)))

    assert nm.finite_diff_check(loss_fn, {"x": r.normal(size=(3, 4))}, step=1e-5) < 1e-4


# ---------------------------------------------------------------------------
# Adam
# ---------------------------------------------------------------------------

def test_adam_zero_gradient_leaves_params():
    state = nm.AdamState(learning_rate=0.1)
    params = {"w": np.array([1.0, -2.0])}
    new_params, new_state = nm.adam_step(state, params, {"w": np.zeros(2)})
    np.testing.assert_array_equal(new_params["w"], params["w"])
    assert new_state.step_count == 1


def test_adam_first_step_hand_computed():
    # scalar param, g=1, lr=0.001, defaults: delta = -lr * 1/(1 + eps) ~ -0.001
    state = nm.AdamState(learning_rate=0.001)
    params = {"w": np.array(0.5)}
    new_params, _ = nm.adam_step(state, params, {"w": np.array(1.0)})
    expected_delta = -0.001 * 1.0 / (1.0 + 1e-8)
    assert float(new_params["w"] - 0.5) == pytest.approx(expected_delta, abs=1e-15)


def test_adam_deterministic():
    r = rng(9)
    params = {"w": r.normal(size=(3, 3))}
    grads = {"w": r.normal(size=(3, 3))}
    state = nm.AdamState(learning_rate=0.01)
    p1, s1 = nm.adam_step(state, {k: v.copy() for k, v in params.items()}, grads)
    p2, s2 = nm.adam_step(state, {k: v.copy() for k, v in params.items()}, grads)
    assert np.array_equal(p1["w"], p2["w"])
    assert np.array_equal(s1.first_moment["w"], s2.first_moment["w"])


def test_adam_shape_mismatch():
    state = nm.AdamState(learning_rate=0.01)
    with pytest.raises(nm.NumericsError):
        nm.adam_step(state, {"w": np.zeros(3)}, {"w": np.zeros(4)})


def test_adam_invalid_hyperparameters():
    with pytest.raises(nm.NumericsError):
        nm.AdamState(learning_rate=0.1, beta1=1.0)
    with pytest.raises(nm.NumericsError):
        nm.AdamState(learning_rate=0.1, epsilon=0.0)


# ---------------------------------------------------------------------------
# finiteness contract
# ---------------------------------------------------------------------------

def test_nan_input_rejected():
    with pytest.raises(nm.NumericsError):
        nm.constant([1.0, float("nan")])


def test_overflow_named_op():
    with np.errstate(over="ignore"):
        with pytest.raises(nm.NumericsError, match="exp"):
            nm.exp(nm.constant(1000.0))
