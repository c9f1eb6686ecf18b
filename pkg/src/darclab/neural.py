"""Dense-network numerics: forward evaluation, reverse-mode gradients,
Adam, and Polyak target updates.

Everything is float64 numpy. Hidden activations are ReLU; the output layer
is either the identity (critics) or ``bound * tanh`` (actors, which keeps
every output component inside (-bound, +bound)).

Parameters live in one contiguous buffer per network; ``weights[k]`` and
``biases[k]`` are views into it, so whole-network updates (Adam, Polyak)
run as single vector operations while layer math keeps its natural shapes.

All functions accept a single input vector ``(d,)`` or a batch ``(n, d)``.
For a batch, parameter gradients are summed over the batch rows while the
input gradient stays per-row; scale the upstream vector by ``1/n`` to get
mean-loss gradients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError


def _layer_shapes(sizes) -> list[tuple[int, int]]:
    return list(zip(sizes[1:], sizes[:-1]))


def _param_count(sizes) -> int:
    return sum(out * inp + out for out, inp in _layer_shapes(sizes))


def _views(sizes, flat: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    weights, biases, offset = [], [], 0
    for out, inp in _layer_shapes(sizes):
        weights.append(flat[offset : offset + out * inp].reshape(out, inp))
        offset += out * inp
        biases.append(flat[offset : offset + out])
        offset += out
    return weights, biases


@dataclass
class Mlp:
    """Feed-forward network. ``weights[k]`` has shape (out_k, in_k)."""

    layer_sizes: tuple[int, ...]
    flat: np.ndarray
    weights: list[np.ndarray] = field(repr=False)
    biases: list[np.ndarray] = field(repr=False)
    output_bound: float | None = None  # None -> identity output, else bound*tanh

    def n_layers(self) -> int:
        return len(self.weights)


@dataclass
class GradientSet:
    """Gradients mirroring an Mlp's parameter layout, plus d(out)/d(input)."""

    flat: np.ndarray
    weight_grads: list[np.ndarray] = field(repr=False)
    bias_grads: list[np.ndarray] = field(repr=False)
    input_gradient: np.ndarray = field(default=None, repr=False)


@dataclass
class AdamState:
    """First/second-moment accumulators aligned with an Mlp's parameters."""

    m_flat: np.ndarray
    v_flat: np.ndarray
    m_weights: list[np.ndarray] = field(repr=False)
    m_biases: list[np.ndarray] = field(repr=False)
    v_weights: list[np.ndarray] = field(repr=False)
    v_biases: list[np.ndarray] = field(repr=False)
    step_count: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    _scratch: np.ndarray = field(default=None, repr=False)


def _empty_like_net(sizes) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    flat = np.empty(_param_count(sizes))
    w, b = _views(sizes, flat)
    return flat, w, b


def mlp_init(layer_sizes, rng: np.random.Generator, output_bound: float | None = None) -> Mlp:
    """Build an Mlp with weights and biases uniform in +-1/sqrt(fan_in)."""
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise ValueError(f"layer_sizes must be >=2 positive integers, got {sizes}")
    flat, weights, biases = _empty_like_net(sizes)
    for w, b, fan_in in zip(weights, biases, sizes[:-1]):
        scale = 1.0 / np.sqrt(fan_in)
        w[...] = rng.uniform(-scale, scale, size=w.shape)
        b[...] = rng.uniform(-scale, scale, size=b.shape)
    return Mlp(sizes, flat, weights, biases, output_bound)


def mlp_zeros_like(net: Mlp) -> Mlp:
    flat = np.zeros_like(net.flat)
    w, b = _views(net.layer_sizes, flat)
    return Mlp(net.layer_sizes, flat, w, b, net.output_bound)


def mlp_clone(net: Mlp) -> Mlp:
    flat = net.flat.copy()
    w, b = _views(net.layer_sizes, flat)
    return Mlp(net.layer_sizes, flat, w, b, net.output_bound)


def _check_input(net: Mlp, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim not in (1, 2) or x.shape[-1] != net.layer_sizes[0]:
        raise ValueError(
            f"input shape {x.shape} does not match network input dimension {net.layer_sizes[0]}"
        )
    return x


def _forward_cached(net: Mlp, x2d: np.ndarray):
    """Forward pass on a 2-D batch, keeping per-layer inputs and preactivations."""
    last = net.n_layers() - 1
    h = x2d
    inputs = []
    preacts = []
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        inputs.append(h)
        z = h @ w.T
        z += b
        preacts.append(z)
        if k < last:
            h = np.maximum(z, 0.0)
        elif net.output_bound is None:
            h = z
        else:
            h = net.output_bound * np.tanh(z)
    return h, inputs, preacts


def mlp_forward(net: Mlp, x) -> np.ndarray:
    """Evaluate the network. Deterministic; (d,) -> (out,), (n,d) -> (n,out)."""
    x = _check_input(net, x)
    single = x.ndim == 1
    out, _, _ = _forward_cached(net, x[None, :] if single else x)
    return out[0] if single else out


def _output_delta(net: Mlp, preacts, upstream2d: np.ndarray) -> np.ndarray:
    if net.output_bound is None:
        return upstream2d
    t = np.tanh(preacts[-1])
    return upstream2d * (net.output_bound * (1.0 - t * t))


def _backward_from_cache(net: Mlp, inputs, preacts, upstream2d: np.ndarray) -> GradientSet:
    last = net.n_layers() - 1
    dz = _output_delta(net, preacts, upstream2d)
    gflat, wg, bg = _empty_like_net(net.layer_sizes)
    for k in range(last, -1, -1):
        np.matmul(dz.T, inputs[k], out=wg[k])
        np.sum(dz, axis=0, out=bg[k])
        dh = dz @ net.weights[k]
        if k > 0:
            np.multiply(dh, preacts[k - 1] > 0.0, out=dh)
            dz = dh
    return GradientSet(gflat, wg, bg, dh)


def _input_gradient_from_cache(net: Mlp, preacts, upstream2d: np.ndarray) -> np.ndarray:
    """Only d(upstream . output)/d(input); skips the parameter-gradient gemms."""
    dz = _output_delta(net, preacts, upstream2d)
    for k in range(net.n_layers() - 1, -1, -1):
        dh = dz @ net.weights[k]
        if k > 0:
            np.multiply(dh, preacts[k - 1] > 0.0, out=dh)
            dz = dh
    return dh


def mlp_backward(net: Mlp, x, upstream) -> GradientSet:
    """Exact reverse-mode gradients of ``upstream . output``.

    For a batch, parameter gradients accumulate the per-row dot products
    (gradient of ``sum_b upstream_b . output_b``) and ``input_gradient``
    has one row per input row.
    """
    x = _check_input(net, x)
    upstream = np.asarray(upstream, dtype=np.float64)
    single = x.ndim == 1
    if upstream.shape != ((net.layer_sizes[-1],) if single else (x.shape[0], net.layer_sizes[-1])):
        raise ValueError(
            f"upstream shape {upstream.shape} does not match output dimension "
            f"{net.layer_sizes[-1]} for input shape {x.shape}"
        )
    x2d = x[None, :] if single else x
    u2d = upstream[None, :] if single else upstream
    _, inputs, preacts = _forward_cached(net, x2d)
    grads = _backward_from_cache(net, inputs, preacts, u2d)
    if single:
        grads.input_gradient = grads.input_gradient[0]
    return grads


def adam_init(net: Mlp, beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8) -> AdamState:
    m = np.zeros_like(net.flat)
    v = np.zeros_like(net.flat)
    mw, mb = _views(net.layer_sizes, m)
    vw, vb = _views(net.layer_sizes, v)
    return AdamState(m, v, mw, mb, vw, vb, beta1=beta1, beta2=beta2, epsilon=epsilon)


def adam_step(net: Mlp, grads: GradientSet, state: AdamState, lr: float) -> tuple[Mlp, AdamState]:
    """Bias-corrected Adam step, applied in place. Returns (net, state).

    Raises NumericalError before touching anything if any gradient entry is
    non-finite.
    """
    if lr <= 0:
        raise ValueError(f"lr must be positive, got {lr}")
    g = grads.flat
    if g.shape != net.flat.shape:
        raise ValueError("gradient layout does not match network parameters")
    if not np.isfinite(g).all():
        raise NumericalError("non-finite gradient entry")
    state.step_count += 1
    t = state.step_count
    b1, b2 = state.beta1, state.beta2
    m, v = state.m_flat, state.v_flat
    if state._scratch is None:
        state._scratch = np.empty_like(m)
    s = state._scratch
    m *= b1
    np.multiply(g, 1.0 - b1, out=s)
    m += s
    v *= b2
    np.multiply(g, g, out=s)
    s *= 1.0 - b2
    v += s
    # update = lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps), refactored to
    # one division: multiply numerator and denominator by sqrt(1-b2^t).
    s2 = np.sqrt(1.0 - b2**t)
    np.sqrt(v, out=s)
    s += state.epsilon * s2
    np.divide(m, s, out=s)
    s *= lr * s2 / (1.0 - b1**t)
    net.flat -= s
    return net, state


def soft_update(target: Mlp, online: Mlp, tau: float) -> Mlp:
    """Polyak blend: every target parameter becomes tau*online + (1-tau)*target."""
    if target.layer_sizes != online.layer_sizes or target.output_bound != online.output_bound:
        raise ValueError("soft_update requires identical architectures")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    target.flat *= 1.0 - tau
    target.flat += tau * online.flat
    return target


def scale_gradients(grads: GradientSet, factor: float) -> GradientSet:
    """New GradientSet with every entry multiplied by ``factor``."""
    flat = factor * grads.flat
    # weight/bias views must be rebuilt against the scaled buffer
    sizes = _sizes_from_grads(grads)
    wg, bg = _views(sizes, flat)
    return GradientSet(flat, wg, bg, factor * grads.input_gradient)


def _sizes_from_grads(grads: GradientSet) -> tuple[int, ...]:
    sizes = [grads.weight_grads[0].shape[1]]
    for w in grads.weight_grads:
        sizes.append(w.shape[0])
    return tuple(sizes)
