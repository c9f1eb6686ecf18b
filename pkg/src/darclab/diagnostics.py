"""Measurement tools: estimator bias against Monte-Carlo ground truth,
critic-deviance statistics, max-norm error measurements, and the
cross-algorithm improvement metric.

Everything here is read-only analysis over an agent snapshot.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np

from .agents import AgentState, TargetConfig, estimator_value, policy_actions, q_values
from .errors import UnsupportedError
from .neural import mlp_forward
from .replay import Batch, ReplayBuffer


@dataclass
class BiasReport:
    mean_estimate: float
    mean_true_value: float
    bias: float  # mean_estimate - mean_true_value
    n_states: int
    rollout_horizon: int


@dataclass
class DevianceStats:
    signed_mean: float   # mean of Q1 - Q2
    mean_abs: float      # mean of |Q1 - Q2|


@dataclass
class ErrorTriple:
    value_error: float
    policy_execution_error: float
    critic_deviance_error: float


def mc_returns(agent: AgentState, env, states: np.ndarray, horizon: int, gamma: float) -> np.ndarray:
    """Truncated discounted return of the deterministic evaluation policy
    from each given state, rolled out in lockstep."""
    if not hasattr(env, "set_state"):
        raise UnsupportedError(f"{type(env).__name__} cannot start from arbitrary states")
    n = len(states)
    envs = [copy.deepcopy(env) for _ in range(n)]
    obs = np.stack([e.set_state(s) for e, s in zip(envs, states)])
    returns = np.zeros(n)
    discount = 1.0
    for _ in range(horizon):
        actions = policy_actions(agent, obs, mode="maxq")
        done = False
        for j, e in enumerate(envs):
            r = e.step(actions[j])
            returns[j] += discount * r.reward
            obs[j] = r.next_state
            done = r.done
        discount *= gamma
        if done:  # lockstep: all copies truncate on the same step
            break
    return returns


def estimate_bias(
    agent: AgentState,
    buffer: ReplayBuffer,
    env,
    cfg: TargetConfig,
    n_states: int = 256,
    horizon: int = 200,
    rng: np.random.Generator | None = None,
    states: np.ndarray | None = None,
) -> BiasReport:
    """Compare the agent's target estimator with Monte-Carlo truth.

    States are sampled uniformly from the replay buffer unless given
    explicitly. The true value is the truncated discounted return of the
    deterministic evaluation policy started from each state.
    """
    if states is None:
        if rng is None:
            raise ValueError("estimate_bias needs an rng when states are not given")
        states = buffer.sample(n_states, rng).states
    states = np.asarray(states, dtype=np.float64)
    est = float(np.mean(estimator_value(agent, states, cfg)))
    true = float(np.mean(mc_returns(agent, env, states, horizon, cfg.gamma)))
    return BiasReport(est, true, est - true, len(states), horizon)


def critic_deviance(agent: AgentState, batch: Batch) -> DevianceStats:
    """Signed and absolute mean of Q1(s,a) - Q2(s,a) over the batch."""
    if len(agent.critics) < 2:
        raise UnsupportedError(f"{agent.algorithm} has a single critic; deviance is undefined")
    d = q_values(agent.critics[0], batch.states, batch.actions) - q_values(
        agent.critics[1], batch.states, batch.actions
    )
    return DevianceStats(float(d.mean()), float(np.abs(d).mean()))


def deviance_reduction(e_baseline: float, e_regularized: float) -> float:
    """(e_baseline - e_regularized) / e_baseline."""
    if e_baseline == 0.0:
        raise ValueError("deviance reduction is undefined for a zero baseline")
    return (e_baseline - e_regularized) / e_baseline


def _action_grid(action_dim: int, bound: float, resolution: int) -> np.ndarray:
    axes = [np.linspace(-bound, bound, resolution) for _ in range(action_dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def error_triple(
    agent: AgentState,
    states: np.ndarray,
    actions: np.ndarray,
    grid_resolution: int = 201,
) -> ErrorTriple:
    """Max-norm error measurements over a batch, using the online networks.

    value_error: per state, |max over an action grid of min_i Q_i(s, a)
    minus the nu=0 double-actor estimate|, maximized over states. The grid
    stands in for the max operator, so low action dimension only.
    """
    if len(agent.critics) < 2 or len(agent.actors) < 2:
        raise UnsupportedError("error_triple needs two critics and two actors")
    da = agent.env_spec.action_dim
    if da > 2:
        raise UnsupportedError(f"action grid intractable for action_dim={da}")
    states = np.asarray(states, dtype=np.float64)
    actions = np.asarray(actions, dtype=np.float64)
    n = len(states)
    q1, q2 = agent.critics

    a_pi1 = mlp_forward(agent.actors[0], states)
    a_pi2 = mlp_forward(agent.actors[1], states)
    q1_pi1 = q_values(q1, states, a_pi1)
    q1_pi2 = q_values(q1, states, a_pi2)
    q2_pi1 = q_values(q2, states, a_pi1)
    q2_pi2 = q_values(q2, states, a_pi2)
    vhat0 = np.maximum(np.minimum(q1_pi1, q2_pi1), np.minimum(q1_pi2, q2_pi2))

    grid = _action_grid(da, agent.env_spec.action_bound, grid_resolution)
    g = len(grid)
    gmax = np.empty(n)
    rows_per_chunk = max(1, 200_000 // g)
    for lo in range(0, n, rows_per_chunk):
        hi = min(lo + rows_per_chunk, n)
        s_rep = np.repeat(states[lo:hi], g, axis=0)
        a_rep = np.tile(grid, (hi - lo, 1))
        qmin = np.minimum(q_values(q1, s_rep, a_rep), q_values(q2, s_rep, a_rep))
        gmax[lo:hi] = qmin.reshape(hi - lo, g).max(axis=1)

    return ErrorTriple(
        value_error=float(np.abs(gmax - vhat0).max()),
        policy_execution_error=float(
            max(np.abs(q1_pi1 - q1_pi2).max(), np.abs(q2_pi1 - q2_pi2).max())
        ),
        critic_deviance_error=float(
            np.abs(q_values(q1, states, actions) - q_values(q2, states, actions)).max()
        ),
    )


def improvement_metric(baseline_scores, method_scores) -> float:
    """Mean per-environment relative improvement of method over baseline.

    The conventional percentage report is 100 * (1 + value), so a method
    equal to its baseline reads 100%.
    """
    d = np.asarray(baseline_scores, dtype=np.float64)
    a = np.asarray(method_scores, dtype=np.float64)
    if d.shape != a.shape or d.ndim != 1 or len(d) < 1:
        raise ValueError("score sequences must be equal-length, non-empty 1-D")
    if np.any(d == 0.0):
        raise ValueError("improvement is undefined for a zero baseline score")
    return float(np.mean((a - d) / d))


def improvement_percent(value: float) -> float:
    return 100.0 * (1.0 + value)
