"""Property suites: estimator-ordering inequalities and gradient oracles.

These back the `check` CLI subcommand. Each suite runs a fixed number of
randomized cases and reports how many failed; the randomness is seeded, so
a reported failure is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agents import (
    TargetConfig,
    actor_gradient,
    clipped_min_q,
    critic_loss,
    smoothed_target_action,
    soft_target,
    target_daddpg,
    target_datd3,
    target_ddpg,
)
from .neural import Mlp, mlp_backward, mlp_forward, mlp_init


@dataclass
class SuiteResult:
    name: str
    failures: int
    total: int

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{self.name}: {status} ({self.total - self.failures}/{self.total})"


def _random_net(rng, in_dim, out_dim, output_bound=None, max_hidden=32):
    n_hidden = int(rng.integers(1, 3))
    hidden = tuple(int(rng.integers(4, max_hidden + 1)) for _ in range(n_hidden))
    net = mlp_init((in_dim, *hidden, out_dim), rng, output_bound)
    scale = rng.uniform(0.5, 2.5)
    for w in net.weights:
        w *= scale
    return net


def _random_case(rng):
    """One random (state dims, critic(s), actor(s), state) configuration."""
    ds = int(rng.integers(1, 5))
    da = int(rng.integers(1, 3))
    bound = float(rng.uniform(0.5, 2.0))
    critics = [_random_net(rng, ds + da, 1) for _ in range(2)]
    actors = [_random_net(rng, ds, da, output_bound=bound) for _ in range(2)]
    state = rng.normal(0.0, 1.5, size=ds)
    return ds, da, bound, critics, actors, state


def theorem1_suite(n: int = 1000, seed: int = 0) -> SuiteResult:
    """Single-critic double-actor target never exceeds either single-path target."""
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(n):
        _, _, _, critics, actors, s = _random_case(rng)
        critic = critics[0]
        v_da = target_daddpg(critic, actors, s)
        if v_da > target_ddpg(critic, actors[0], s) or v_da > target_ddpg(critic, actors[1], s):
            failures += 1
    return SuiteResult("theorem1_daddpg_le_ddpg", failures, n)


def theorem2_suite(n: int = 1000, seed: int = 0) -> SuiteResult:
    """Double-actor-double-critic target never drops below the clipped
    single-actor target at the shared smoothed action."""
    rng = np.random.default_rng(seed)
    cfg = TargetConfig()
    failures = 0
    for _ in range(n):
        _, _, bound, critics, actors, s = _random_case(rng)
        a1 = smoothed_target_action(actors[0], s, cfg, rng, bound)
        a2 = smoothed_target_action(actors[1], s, cfg, rng, bound)
        v_td3 = float(clipped_min_q(critics, s[None, :], a1[None, :])[0])
        if target_datd3(critics, s, a1, a2) < v_td3:
            failures += 1
    return SuiteResult("theorem2_datd3_ge_td3", failures, n)


def soft_target_suite(n: int = 1000, seed: int = 0, nu_grid=(0.0, 0.25, 0.5, 0.75)) -> SuiteResult:
    """nu=0 endpoint equality with the max-form target, monotone decrease in
    nu, and containment between the two per-actor values."""
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(n):
        _, _, _, critics, actors, s = _random_case(rng)
        a1 = mlp_forward(actors[0], s)
        a2 = mlp_forward(actors[1], s)
        q1 = float(clipped_min_q(critics, s[None, :], a1[None, :])[0])
        q2 = float(clipped_min_q(critics, s[None, :], a2[None, :])[0])
        values = [soft_target(critics, s, a1, a2, nu) for nu in nu_grid]
        ok = values[0] == target_datd3(critics, s, a1, a2)
        # 1e-12 headroom covers rounding of nu*min + (1-nu)*max; the
        # mathematical decrease per nu step is ~0.25*(max-min) >> that.
        slack = 1e-12 * max(1.0, abs(values[0]))
        ok = ok and all(v_next <= v + slack for v, v_next in zip(values, values[1:]))
        ok = ok and all(min(q1, q2) - slack <= v <= max(q1, q2) + slack for v in values)
        if not ok:
            failures += 1
    return SuiteResult("soft_target_endpoint_monotone", failures, n)


def _fd_entry(f, array, idx, h):
    old = array[idx]
    array[idx] = old + h
    fp = f()
    array[idx] = old - h
    fm = f()
    array[idx] = old
    return (fp - fm) / (2.0 * h)


def _grad_matches(analytic: float, fd: float, rtol: float, floor: float) -> bool:
    return abs(analytic - fd) <= max(floor, rtol * max(abs(analytic), abs(fd)))


def _kink_margin(net: Mlp, x: np.ndarray) -> float:
    """Smallest |preactivation| of the hidden layers; tiny values sit on a
    ReLU kink where finite differences are meaningless."""
    h = np.atleast_2d(x)
    margin = np.inf
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = h @ w.T + b
        if k < len(net.weights) - 1:
            margin = min(margin, float(np.abs(z).min()))
            h = np.maximum(z, 0.0)
        else:
            h = z
    return margin


def gradient_suite(
    n_nets: int = 20,
    seed: int = 0,
    h: float = 1e-5,
    rtol: float = 1e-4,
    floor: float = 1e-8,
) -> SuiteResult:
    """Check every mlp_backward and critic_loss gradient entry against
    central finite differences."""
    rng = np.random.default_rng(seed)
    failures = 0
    total = 0

    for case in range(n_nets):
        bound = 1.5 if case % 2 else None  # alternate identity / scaled-tanh outputs
        while True:
            in_dim = int(rng.integers(1, 7))
            out_dim = int(rng.integers(1, 4))
            net = _random_net(rng, in_dim, out_dim, output_bound=bound)
            x = rng.normal(0.0, 1.0, size=in_dim)
            if _kink_margin(net, x) > 1e-3:
                break
        upstream = rng.normal(0.0, 1.0, size=out_dim)
        grads = mlp_backward(net, x, upstream)

        def f():
            return float(upstream @ mlp_forward(net, x))

        for arr, gs in (
            *zip(net.weights, grads.weight_grads),
            *zip(net.biases, grads.bias_grads),
        ):
            for idx in np.ndindex(arr.shape):
                total += 1
                if not _grad_matches(gs[idx], _fd_entry(f, arr, idx, h), rtol, floor):
                    failures += 1
        for idx in np.ndindex(x.shape):
            total += 1
            if not _grad_matches(grads.input_gradient[idx], _fd_entry(f, x, idx, h), rtol, floor):
                failures += 1

    for case in range(n_nets):
        while True:
            ds = int(rng.integers(1, 4))
            da = int(rng.integers(1, 3))
            critic = _random_net(rng, ds + da, 1, max_hidden=16)
            other = _random_net(rng, ds + da, 1, max_hidden=16)
            nb = int(rng.integers(2, 7))
            states = rng.normal(0.0, 1.0, size=(nb, ds))
            actions = rng.normal(0.0, 1.0, size=(nb, da))
            if _kink_margin(critic, np.hstack((states, actions))) > 1e-3:
                break
        y = rng.normal(0.0, 1.0, size=nb)
        other_q = mlp_forward(other, np.hstack((states, actions)))[:, 0]
        lam = 0.005 if case % 2 else 0.0
        _, grads = critic_loss(critic, states, actions, y, other_q, lam)

        def f_loss():
            return critic_loss(critic, states, actions, y, other_q, lam)[0]

        for arr, gs in (
            *zip(critic.weights, grads.weight_grads),
            *zip(critic.biases, grads.bias_grads),
        ):
            for idx in np.ndindex(arr.shape):
                total += 1
                if not _grad_matches(gs[idx], _fd_entry(f_loss, arr, idx, h), rtol, floor):
                    failures += 1

    return SuiteResult("gradient_finite_difference", failures, total)


def actor_gradient_suite(n_nets: int = 10, seed: int = 0) -> SuiteResult:
    """Policy-gradient chain check: actor_gradient matches finite differences
    of mean_b Q(s_b, pi(s_b)) through the frozen critic."""
    rng = np.random.default_rng(seed)
    failures = 0
    total = 0
    for _ in range(n_nets):
        while True:
            ds = int(rng.integers(1, 4))
            da = int(rng.integers(1, 3))
            actor = _random_net(rng, ds, da, output_bound=1.5, max_hidden=12)
            critic = _random_net(rng, ds + da, 1, max_hidden=12)
            states = rng.normal(0.0, 1.0, size=(4, ds))
            a = mlp_forward(actor, states)
            if (
                _kink_margin(actor, states) > 1e-3
                and _kink_margin(critic, np.hstack((states, a))) > 1e-3
            ):
                break
        _, grads = actor_gradient(actor, critic, states)

        def f():
            acts = mlp_forward(actor, states)
            return float(mlp_forward(critic, np.hstack((states, acts))).mean())

        for arr, gs in (
            *zip(actor.weights, grads.weight_grads),
            *zip(actor.biases, grads.bias_grads),
        ):
            for idx in np.ndindex(arr.shape):
                total += 1
                if not _grad_matches(gs[idx], _fd_entry(f, arr, idx, 1e-5), 1e-4, 1e-8):
                    failures += 1
    return SuiteResult("actor_gradient_chain", failures, total)


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [
        theorem1_suite(seed=seed),
        theorem2_suite(seed=seed),
        soft_target_suite(seed=seed),
        gradient_suite(seed=seed),
        actor_gradient_suite(seed=seed),
    ]
