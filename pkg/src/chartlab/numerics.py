"""Dense small-tensor arithmetic with reverse-mode differentiation.

All values are 64-bit numpy arrays. Operations build a tape of
(parent, vjp) edges; ``backward`` walks it in reverse topological order
and returns exact gradients for every named parameter reachable from a
scalar loss. ``finite_diff_check`` is the independent oracle used to
validate the analytic gradients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Finiteness verification after every public op. Cheap at desk scale;
# can be switched off for throughput experiments.
CHECK_FINITE = True

_GELU_C = math.sqrt(2.0 / math.pi)


class NumericsError(ValueError):
    """Contract violation or numerical failure inside the tape."""


def _as_f64(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    return arr


def _check_finite(arr: np.ndarray, op: str) -> None:
    if CHECK_FINITE and not np.isfinite(arr).all():
        raise NumericsError(f"non-finite value produced by op '{op}'")


class Node:
    """One tape entry: a value plus vjp edges back to its parents."""

    __slots__ = ("value", "parents", "op", "name")

    def __init__(self, value, parents=(), op="leaf", name=None):
        self.value = _as_f64(value)
        self.parents = parents  # tuple of (Node, vjp) pairs
        self.op = op
        self.name = name
        _check_finite(self.value, op)

    @property
    def shape(self):
        return self.value.shape

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __sub__(self, other):
        return add(self, mul(other, -1.0))

    def __neg__(self):
        return mul(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self):
        return f"Node(op={self.op!r}, shape={self.value.shape})"


def constant(x) -> Node:
    return Node(x, op="constant")


def param(name: str, value) -> Node:
    """A named leaf; ``backward`` reports gradients keyed by this name."""
    return Node(value, op="param", name=name)


def _wrap(x) -> Node:
    return x if isinstance(x, Node) else constant(x)


def _unbroadcast(grad: np.ndarray, shape) -> np.ndarray:
    """Sum ``grad`` down to ``shape`` (inverse of numpy broadcasting)."""
    if grad.shape == tuple(shape):
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


# ---------------------------------------------------------------------------
# primitives
# ---------------------------------------------------------------------------

def add(a, b) -> Node:
    a, b = _wrap(a), _wrap(b)
    out = a.value + b.value
    return Node(
        out,
        parents=(
            (a, lambda g: _unbroadcast(g, a.value.shape)),
            (b, lambda g: _unbroadcast(g, b.value.shape)),
        ),
        op="add",
    )


def mul(a, b) -> Node:
    a, b = _wrap(a), _wrap(b)
    out = a.value * b.value
    return Node(
        out,
        parents=(
            (a, lambda g: _unbroadcast(g * b.value, a.value.shape)),
            (b, lambda g: _unbroadcast(g * a.value, b.value.shape)),
        ),
        op="mul",
    )


def matmul(a, b) -> Node:
    a, b = _wrap(a), _wrap(b)
    out = a.value @ b.value
    return Node(
        out,
        parents=(
            (a, lambda g: g @ np.swapaxes(b.value, -1, -2)),
            (b, lambda g: np.swapaxes(a.value, -1, -2) @ g),
        ),
        op="matmul",
    )


def exp(a) -> Node:
    a = _wrap(a)
    out = np.exp(a.value)
    return Node(out, parents=((a, lambda g: g * out),), op="exp")


def log(a) -> Node:
    a = _wrap(a)
    out = np.log(a.value)
    return Node(out, parents=((a, lambda g: g / a.value),), op="log")


def tanh(a) -> Node:
    a = _wrap(a)
    out = np.tanh(a.value)
    return Node(out, parents=((a, lambda g: g * (1.0 - out * out)),), op="tanh")


def gelu(a) -> Node:
    """tanh-approximation GELU; smooth everywhere, so finite differences
    stay well conditioned."""
    a = _wrap(a)
    x = a.value
    inner = _GELU_C * (x + 0.044715 * x**3)
    t = np.tanh(inner)
    out = 0.5 * x * (1.0 + t)

    def vjp(g):
        d_inner = _GELU_C * (1.0 + 3 * 0.044715 * x**2)
        return g * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * d_inner)

    return Node(out, parents=((a, vjp),), op="gelu")


def reshape(a, shape) -> Node:
    a = _wrap(a)
    old = a.value.shape
    return Node(
        a.value.reshape(shape),
        parents=((a, lambda g: g.reshape(old)),),
        op="reshape",
    )


def transpose(a, axes=None) -> Node:
    a = _wrap(a)
    if axes is None:
        axes = tuple(reversed(range(a.value.ndim)))
    inv = np.argsort(axes)
    return Node(
        np.transpose(a.value, axes),
        parents=((a, lambda g: np.transpose(g, inv)),),
        op="transpose",
    )


def reduce_sum(a, axis=None, keepdims=False) -> Node:
    a = _wrap(a)
    out = a.value.sum(axis=axis, keepdims=keepdims)

    def vjp(g):
        if axis is None:
            return np.broadcast_to(g, a.value.shape).copy()
        if not keepdims:
            g = np.expand_dims(g, axis)
        return np.broadcast_to(g, a.value.shape).copy()

    return Node(out, parents=((a, vjp),), op="sum")


def reduce_mean(a, axis=None, keepdims=False) -> Node:
    a = _wrap(a)
    if axis is None:
        n = a.value.size
    else:
        n = a.value.shape[axis]
    return mul(reduce_sum(a, axis=axis, keepdims=keepdims), 1.0 / n)


def slice_cols(a, start: int, stop: int) -> Node:
    """Columns [start:stop) of a 2-D node."""
    a = _wrap(a)
    out = a.value[:, start:stop]

    def vjp(g):
        full = np.zeros_like(a.value)
        full[:, start:stop] = g
        return full

    return Node(out.copy(), parents=((a, vjp),), op="slice_cols")


def concat_rows(nodes) -> Node:
    """Stack 2-D nodes along axis 0."""
    nodes = [_wrap(n) for n in nodes]
    sizes = [n.value.shape[0] for n in nodes]
    offsets = np.cumsum([0] + sizes)
    out = np.concatenate([n.value for n in nodes], axis=0)

    def make_vjp(i):
        lo, hi = offsets[i], offsets[i + 1]
        return lambda g: g[lo:hi]

    return Node(
        out,
        parents=tuple((n, make_vjp(i)) for i, n in enumerate(nodes)),
        op="concat_rows",
    )


def gather_rows(table, indices) -> Node:
    """Row lookup (embedding gather). ``indices`` is any integer array."""
    table = _wrap(table)
    idx = np.asarray(indices)
    out = table.value[idx]

    def vjp(g):
        full = np.zeros_like(table.value)
        np.add.at(full, idx, g)
        return full

    return Node(out, parents=((table, vjp),), op="gather_rows")


def softmax(a, axis=-1) -> Node:
    """Max-subtracted softmax along ``axis``."""
    a = _wrap(a)
    shifted = a.value - a.value.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=axis, keepdims=True)

    def vjp(g):
        return out * (g - (g * out).sum(axis=axis, keepdims=True))

    return Node(out, parents=((a, vjp),), op="softmax")


def log_softmax(a, axis=-1) -> Node:
    a = _wrap(a)
    shifted = a.value - a.value.max(axis=axis, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    out = shifted - lse
    probs = np.exp(out)

    def vjp(g):
        return g - probs * g.sum(axis=axis, keepdims=True)

    return Node(out, parents=((a, vjp),), op="log_softmax")


def layer_norm(x, gamma, beta, eps: float = 1e-5) -> Node:
    """Normalize over the last axis, then scale and shift."""
    x, gamma, beta = _wrap(x), _wrap(gamma), _wrap(beta)
    xv = x.value
    mean = xv.mean(axis=-1, keepdims=True)
    var = xv.var(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + eps)
    xhat = (xv - mean) * inv
    out = xhat * gamma.value + beta.value
    d = xv.shape[-1]

    def vjp_x(g):
        gg = g * gamma.value
        return inv * (
            gg
            - gg.mean(axis=-1, keepdims=True)
            - xhat * (gg * xhat).mean(axis=-1, keepdims=True)
        )

    def vjp_gamma(g):
        return _unbroadcast(g * xhat, gamma.value.shape)

    def vjp_beta(g):
        return _unbroadcast(g, beta.value.shape)

    return Node(
        out,
        parents=((x, vjp_x), (gamma, vjp_gamma), (beta, vjp_beta)),
        op="layer_norm",
    )


def l2_normalize_rows(m) -> Node:
    """Scale every row of a 2-D node to unit Euclidean norm.

    Zero rows are rejected in the forward pass; the 1e-12 floor appears
    only in the gradient denominator.
    """
    m = _wrap(m)
    norms = np.linalg.norm(m.value, axis=-1, keepdims=True)
    if np.any(norms == 0.0):
        raise NumericsError("l2_normalize_rows: zero row")
    out = m.value / norms

    def vjp(g):
        proj = (g * out).sum(axis=-1, keepdims=True)
        return (g - out * proj) / np.maximum(norms, 1e-12)

    return Node(out, parents=((m, vjp),), op="l2_normalize_rows")


def softmax_cross_entropy(logits, target_index: int) -> Node:
    """-log(softmax(logits)[target]) for a 1-D logit vector."""
    logits = _wrap(logits)
    if logits.value.ndim != 1:
        raise NumericsError("softmax_cross_entropy expects a 1-D logit vector")
    n = logits.value.shape[0]
    if not (0 <= target_index < n):
        raise NumericsError(f"target index {target_index} out of range for {n} logits")
    shifted = logits.value - logits.value.max()
    lse = np.log(np.exp(shifted).sum())
    loss = lse - shifted[target_index]
    probs = np.exp(shifted - lse)

    def vjp(g):
        grad = probs.copy()
        grad[target_index] -= 1.0
        return g * grad

    return Node(loss, parents=((logits, vjp),), op="softmax_cross_entropy")


def cross_entropy_rows(logits, targets) -> Node:
    """Per-row -log softmax at ``targets``; returns a length-n vector node."""
    logits = _wrap(logits)
    if logits.value.ndim != 2:
        raise NumericsError("cross_entropy_rows expects a 2-D logit matrix")
    targets = np.asarray(targets, dtype=np.intp)
    n = logits.value.shape[0]
    shifted = logits.value - logits.value.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1))
    rows = np.arange(n)
    losses = lse - shifted[rows, targets]
    probs = np.exp(shifted - lse[:, None])

    def vjp(g):
        grad = probs * g[:, None]
        grad[rows, targets] -= g
        return grad

    return Node(losses, parents=((logits, vjp),), op="cross_entropy_rows")


# ---------------------------------------------------------------------------
# reverse pass
# ---------------------------------------------------------------------------

def backward(loss: Node) -> dict[str, np.ndarray]:
    """Reverse-mode gradients of a scalar loss w.r.t. every named param.

    Raises on non-scalar losses and on NaN gradients (naming the op that
    produced them).
    """
    if loss.value.ndim != 0 and loss.value.size != 1:
        raise NumericsError(f"backward requires a scalar loss, got shape {loss.value.shape}")

    order: list[Node] = []
    seen: set[int] = set()
    stack: list[tuple[Node, bool]] = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent, _ in node.parents:
            if id(parent) not in seen:
                stack.append((parent, False))

    grads: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.value)}
    out: dict[str, np.ndarray] = {}
    for node in reversed(order):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        if not np.isfinite(g).all():
            raise NumericsError(f"NaN gradient encountered at op '{node.op}'")
        if node.name is not None:
            out[node.name] = out.get(node.name, 0.0) + g
        for parent, vjp in node.parents:
            contrib = vjp(g)
            pid = id(parent)
            if pid in grads:
                grads[pid] = grads[pid] + contrib
            else:
                grads[pid] = contrib
    return out


def finite_diff_check(fn, params: dict[str, np.ndarray], step: float) -> float:
    """Max relative error between analytic and central-difference gradients.

    ``fn`` maps a dict of named Nodes to a scalar Node and must be
    deterministic (verified by evaluating twice). Error per entry is
    |analytic - fd| / max(|analytic|, |fd|, 1e-12).
    """
    if step <= 0:
        raise NumericsError("finite_diff_check requires step > 0")

    def evaluate(values: dict[str, np.ndarray]) -> float:
        nodes = {k: param(k, v) for k, v in values.items()}
        return float(fn(nodes).value)

    base = evaluate(params)
    if evaluate(params) != base:
        raise NumericsError("finite_diff_check: fn is not deterministic")

    loss = fn({k: param(k, v) for k, v in params.items()})
    analytic = backward(loss)

    worst = 0.0
    for key, value in params.items():
        grad = np.zeros_like(np.asarray(value, dtype=np.float64))
        an = analytic.get(key, grad)
        flat = np.asarray(value, dtype=np.float64).copy()
        shape = flat.shape
        flat = flat.ravel()
        an_flat = np.asarray(an).ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            plus = evaluate({**params, key: flat.reshape(shape)})
            flat[i] = orig - step
            minus = evaluate({**params, key: flat.reshape(shape)})
            flat[i] = orig
            fd = (plus - minus) / (2.0 * step)
            denom = max(abs(an_flat[i]), abs(fd), 1e-12)
            worst = max(worst, abs(an_flat[i] - fd) / denom)
    return worst


# ---------------------------------------------------------------------------
# Adam
# ---------------------------------------------------------------------------

@dataclass
class AdamState:
    """Optimizer moments plus hyperparameters; zero moments at step 0."""

    learning_rate: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    step_count: int = 0
    first_moment: dict = field(default_factory=dict)
    second_moment: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise NumericsError("Adam betas must lie in (0, 1)")
        if self.epsilon <= 0.0:
            raise NumericsError("Adam epsilon must be positive")


def adam_step(
    state: AdamState,
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    lr: float | None = None,
) -> tuple[dict[str, np.ndarray], AdamState]:
    """One bias-corrected Adam update. Pure: returns fresh params and state."""
    t = state.step_count + 1
    lr = state.learning_rate if lr is None else lr
    new_params: dict[str, np.ndarray] = {}
    new_m: dict[str, np.ndarray] = {}
    new_v: dict[str, np.ndarray] = {}
    for key, p in params.items():
        g = grads.get(key)
        if g is None:
            g = np.zeros_like(p)
        g = np.asarray(g, dtype=np.float64)
        if g.shape != np.asarray(p).shape:
            raise NumericsError(f"adam_step: gradient shape mismatch for '{key}'")
        m = state.first_moment.get(key, np.zeros_like(p))
        v = state.second_moment.get(key, np.zeros_like(p))
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * g * g
        m_hat = m / (1.0 - state.beta1**t)
        v_hat = v / (1.0 - state.beta2**t)
        new_params[key] = p - lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
        new_m[key] = m
        new_v[key] = v
    new_state = AdamState(
        learning_rate=state.learning_rate,
        beta1=state.beta1,
        beta2=state.beta2,
        epsilon=state.epsilon,
        step_count=t,
        first_moment=new_m,
        second_moment=new_v,
    )
    return new_params, new_state
