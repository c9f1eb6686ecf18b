"""Shared helpers for building small hand-specified networks in tests."""

import numpy as np

from darclab.neural import Mlp, mlp_init


def linear_net(weight, bias, output_bound=None) -> Mlp:
    """Single-layer network computing W x + b (optionally bound*tanh of it)."""
    w = np.atleast_2d(np.asarray(weight, dtype=np.float64))
    net = mlp_init((w.shape[1], w.shape[0]), np.random.default_rng(0), output_bound)
    net.weights[0][...] = w
    net.biases[0][...] = np.asarray(bias, dtype=np.float64)
    return net


def constant_net(in_dim: int, value: float) -> Mlp:
    """Network that outputs ``value`` regardless of its input."""
    return linear_net(np.zeros((1, in_dim)), [value])


def random_net(rng, sizes, output_bound=None, scale=1.0) -> Mlp:
    net = mlp_init(sizes, rng, output_bound)
    if scale != 1.0:
        for w in net.weights:
            w *= scale
    return net


class FixedNormal:
    """Duck-typed rng whose .normal always returns a fixed value."""

    def __init__(self, value: float):
        self.value = value

    def normal(self, loc, scale, size=None):
        return np.full(size, self.value) if size is not None else self.value
