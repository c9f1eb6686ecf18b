"""The double-actor algorithm family.

Six algorithms share one chassis of actors, critics and Polyak-tracked
target copies:

  ddpg    1 actor, 1 critic; target Q'(s', pi'(s')).
  td3     1 actor, 2 critics; target min_i Q'_i(s', a~) with smoothed a~,
          delayed actor/target updates.
  daddpg  2 actors, 1 critic; target min_i Q'(s', pi'_i(s') + noise);
          actors updated on alternating steps.
  datd3   2 actors, 2 critics; per-actor min over critics, then max over
          actors; both pairs updated every step on separate batches.
  ctd3    2 actors, 2 critics; per-pair td3-style target, one pair updated
          per step (cross update), no coupling between the pairs' targets.
  darc    2 actors, 2 critics; soft target nu*min+(1-nu)*max over the
          per-actor clipped values, squared critic-deviance penalty with
          weight lam, cross update (or literal both-pair update).

Double-actor agents act by evaluating both actors' candidate actions and
executing the higher-scoring one (ties go to actor 1); single-critic agents
score with their critic, double-critic agents with the min over both.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envs import EnvSpec
from .errors import ConfigError, NumericalError
from .neural import (
    AdamState,
    GradientSet,
    Mlp,
    adam_init,
    adam_step,
    mlp_clone,
    mlp_forward,
    mlp_init,
    soft_update,
    _backward_from_cache,
    _forward_cached,
    _input_gradient_from_cache,
)
from .replay import Batch, ReplayBuffer

ALGORITHMS = ("ddpg", "td3", "daddpg", "datd3", "ctd3", "darc")
_N_ACTORS = {"ddpg": 1, "td3": 1, "daddpg": 2, "datd3": 2, "ctd3": 2, "darc": 2}
_N_CRITICS = {"ddpg": 1, "td3": 2, "daddpg": 1, "datd3": 2, "ctd3": 2, "darc": 2}


@dataclass
class TargetConfig:
    """Knobs governing target-value computation and tracking."""

    nu: float = 0.25
    lam: float = 0.005
    target_noise_std: float = 0.2
    noise_clip: float = 0.5
    gamma: float = 0.99
    tau: float = 0.005

    def __post_init__(self):
        if not 0.0 <= self.nu < 1.0:
            raise ConfigError(f"nu must lie in [0, 1), got {self.nu}")
        if self.lam < 0.0:
            raise ConfigError(f"lam must be >= 0, got {self.lam}")
        if self.noise_clip <= 0.0:
            raise ConfigError(f"noise_clip must be positive, got {self.noise_clip}")
        if not 0.0 <= self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must lie in [0, 1], got {self.tau}")
        if self.target_noise_std < 0.0:
            raise ConfigError(f"target_noise_std must be >= 0, got {self.target_noise_std}")


@dataclass
class ExplorationConfig:
    action_noise_std: float = 0.1
    mode: str = "maxq"  # "maxq" executes the higher-scoring actor, "first" always actor 1

    def __post_init__(self):
        if self.action_noise_std < 0.0:
            raise ConfigError(f"action_noise_std must be >= 0, got {self.action_noise_std}")
        if self.mode not in ("maxq", "first"):
            raise ConfigError(f"exploration mode must be 'maxq' or 'first', got {self.mode!r}")


@dataclass
class AgentState:
    algorithm: str
    env_spec: EnvSpec
    actors: list[Mlp]
    critics: list[Mlp]
    target_actors: list[Mlp]
    target_critics: list[Mlp]
    actor_opts: list[AdamState]
    critic_opts: list[AdamState]
    step_count: int = 0
    value_correction: bool = True   # False: ablation that keeps the second actor for exploration only
    update_scheme: str = "cross"    # darc only: "cross" or "both"


def make_agent(
    algorithm: str,
    env_spec: EnvSpec,
    hidden_sizes,
    rng: np.random.Generator,
    value_correction: bool = True,
    update_scheme: str = "cross",
) -> AgentState:
    """Initialize actors/critics with random parameters and targets as copies.

    Networks are drawn in a fixed order (actors then critics) so a given rng
    state always produces the same agent.
    """
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if update_scheme not in ("cross", "both"):
        raise ConfigError(f"update_scheme must be 'cross' or 'both', got {update_scheme!r}")
    hidden = tuple(int(h) for h in hidden_sizes)
    actor_sizes = (env_spec.state_dim, *hidden, env_spec.action_dim)
    critic_sizes = (env_spec.state_dim + env_spec.action_dim, *hidden, 1)
    actors = [
        mlp_init(actor_sizes, rng, output_bound=env_spec.action_bound)
        for _ in range(_N_ACTORS[algorithm])
    ]
    critics = [mlp_init(critic_sizes, rng) for _ in range(_N_CRITICS[algorithm])]
    return AgentState(
        algorithm=algorithm,
        env_spec=env_spec,
        actors=actors,
        critics=critics,
        target_actors=[mlp_clone(a) for a in actors],
        target_critics=[mlp_clone(c) for c in critics],
        actor_opts=[adam_init(a) for a in actors],
        critic_opts=[adam_init(c) for c in critics],
        value_correction=value_correction,
        update_scheme=update_scheme,
    )


# --- Value evaluation helpers -------------------------------------------------


def _as_batch(x) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        return x[None, :], True
    return x, False


def q_values(critic: Mlp, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """Q(s, a) for a batch: critic forward on the concatenated rows."""
    return mlp_forward(critic, np.hstack((states, actions)))[:, 0]


def clipped_min_q(critics, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
    """min_i Q_i(s, a); with a single critic this is just its value."""
    x = np.hstack((states, actions))
    q = mlp_forward(critics[0], x)[:, 0]
    for c in critics[1:]:
        q = np.minimum(q, mlp_forward(c, x)[:, 0])
    return q


def _paired_min_q(critics, states, a_first, a_second) -> tuple[np.ndarray, np.ndarray]:
    """min-over-critics at two action sets, evaluated on one stacked batch.

    Row-stacking halves the number of network passes; each critic still sees
    both action sets in a single forward.
    """
    n, ds = states.shape
    da = a_first.shape[1]
    x = np.empty((2 * n, ds + da))
    x[:n, :ds] = states
    x[n:, :ds] = states
    x[:n, ds:] = a_first
    x[n:, ds:] = a_second
    q = mlp_forward(critics[0], x)[:, 0]
    for c in critics[1:]:
        q = np.minimum(q, mlp_forward(c, x)[:, 0])
    return q[:n], q[n:]


def smoothed_target_action(
    actor_target: Mlp,
    next_states,
    cfg: TargetConfig,
    rng: np.random.Generator,
    action_bound: float,
) -> np.ndarray:
    """Target action with clipped Gaussian smoothing noise, clamped to bounds."""
    s, single = _as_batch(next_states)
    a = mlp_forward(actor_target, s)
    if cfg.target_noise_std > 0.0:
        eps = rng.normal(0.0, cfg.target_noise_std, size=a.shape)
        np.clip(eps, -cfg.noise_clip, cfg.noise_clip, out=eps)
        a = np.clip(a + eps, -action_bound, action_bound)
    return a[0] if single else a


# --- Target-value estimators ----------------------------------------------------
# Each accepts a single state vector (returning a float) or a batch (returning
# a vector). These are the noise-free definitional forms; training applies
# smoothing noise to the actions first where the algorithm calls for it.


def target_ddpg(critic_target: Mlp, actor_target: Mlp, next_state) -> float | np.ndarray:
    s, single = _as_batch(next_state)
    v = q_values(critic_target, s, mlp_forward(actor_target, s))
    return float(v[0]) if single else v


def target_td3(critic_targets, actor_target: Mlp, next_state) -> float | np.ndarray:
    s, single = _as_batch(next_state)
    v = clipped_min_q(critic_targets, s, mlp_forward(actor_target, s))
    return float(v[0]) if single else v


def target_daddpg(critic_target: Mlp, actor_targets, next_state) -> float | np.ndarray:
    """Single critic evaluated at both actors' actions, lower value kept."""
    s, single = _as_batch(next_state)
    v = np.minimum(
        q_values(critic_target, s, mlp_forward(actor_targets[0], s)),
        q_values(critic_target, s, mlp_forward(actor_targets[1], s)),
    )
    return float(v[0]) if single else v


def target_datd3(critic_targets, next_state, action_first, action_second) -> float | np.ndarray:
    """max over actors of (min over critics), at the two given actions."""
    s, single = _as_batch(next_state)
    a1, _ = _as_batch(action_first)
    a2, _ = _as_batch(action_second)
    v = np.maximum(clipped_min_q(critic_targets, s, a1), clipped_min_q(critic_targets, s, a2))
    return float(v[0]) if single else v


def soft_target(critic_targets, next_state, action_first, action_second, nu: float) -> float | np.ndarray:
    """Convex combination nu*min + (1-nu)*max of the per-actor clipped values."""
    if not 0.0 <= nu < 1.0:
        raise ConfigError(f"nu must lie in [0, 1), got {nu}")
    s, single = _as_batch(next_state)
    a1, _ = _as_batch(action_first)
    a2, _ = _as_batch(action_second)
    q1 = clipped_min_q(critic_targets, s, a1)
    q2 = clipped_min_q(critic_targets, s, a2)
    v = nu * np.minimum(q1, q2) + (1.0 - nu) * np.maximum(q1, q2)
    return float(v[0]) if single else v


# --- Losses and gradients ------------------------------------------------------


def critic_loss(
    critic: Mlp,
    states: np.ndarray,
    actions: np.ndarray,
    targets: np.ndarray,
    other_q: np.ndarray | None = None,
    lam: float = 0.0,
) -> tuple[float, GradientSet]:
    """Mean squared TD error plus lam * mean squared critic deviance.

    ``other_q`` holds the opposing critic's values at the same (s, a) and is
    treated as a constant, so gradients touch only ``critic``. Returns the
    scalar loss and its parameter gradients.
    """
    targets = np.asarray(targets, dtype=np.float64)
    if not np.isfinite(targets).all():
        raise NumericalError("non-finite critic target")
    x = np.hstack((states, actions))
    out, inputs, preacts = _forward_cached(critic, x)
    q = out[:, 0]
    n = len(q)
    resid = q - targets
    loss = float(resid @ resid) / n
    upstream = 2.0 * resid / n
    if other_q is not None and lam != 0.0:
        dev = q - other_q
        loss += lam * float(dev @ dev) / n
        upstream = upstream + (2.0 * lam / n) * dev
    grads = _backward_from_cache(critic, inputs, preacts, upstream[:, None])
    return loss, grads


def actor_gradient(actor: Mlp, critic: Mlp, states: np.ndarray) -> tuple[float, GradientSet]:
    """Deterministic policy gradient of mean_b Q(s_b, pi(s_b)) w.r.t. the actor.

    Chains the critic's gradient with respect to the action through the
    actor's parameter Jacobian. Returns (mean Q, ascent-direction gradients).
    """
    n, ds = states.shape
    a, a_inputs, a_preacts = _forward_cached(actor, states)
    x = np.hstack((states, a))
    out, _, c_preacts = _forward_cached(critic, x)
    dq_dx = _input_gradient_from_cache(critic, c_preacts, np.full((n, 1), 1.0 / n))
    grads = _backward_from_cache(actor, a_inputs, a_preacts, dq_dx[:, ds:])
    return float(out.mean()), grads


# --- Action selection ------------------------------------------------------------


def policy_actions(agent: AgentState, states: np.ndarray, mode: str = "maxq") -> np.ndarray:
    """Deterministic policy for a batch of states.

    maxq mode evaluates both actors' candidates and keeps the higher-scoring
    one per state (min over both critics when the agent has two); ties go to
    actor 1. Single-actor agents and "first" mode use actor 1 directly.
    """
    a1 = mlp_forward(agent.actors[0], states)
    if len(agent.actors) == 1 or mode == "first":
        return a1
    a2 = mlp_forward(agent.actors[1], states)
    s1, s2 = _paired_min_q(agent.critics, states, a1, a2)
    return np.where((s1 >= s2)[:, None], a1, a2)


def select_action(
    agent: AgentState,
    state,
    expl: ExplorationConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """One action for one state: deterministic policy plus Gaussian noise, clamped."""
    s = np.asarray(state, dtype=np.float64)
    a = policy_actions(agent, s[None, :], expl.mode)[0]
    if expl.action_noise_std > 0.0:
        a = a + rng.normal(0.0, expl.action_noise_std, size=a.shape)
    bound = agent.env_spec.action_bound
    return np.clip(a, -bound, bound)


def estimator_value(agent: AgentState, states, cfg: TargetConfig) -> float | np.ndarray:
    """The agent's own noise-free target estimator, for bias measurement.

    ctd3 is scored with the td3 form on its first pair (its per-pair targets
    are td3-style and the pairs are symmetric). Agents built with
    value_correction=False are scored with the single-path estimator their
    targets actually use.
    """
    s, single = _as_batch(states)
    algo = agent.algorithm
    tas, tcs = agent.target_actors, agent.target_critics
    if algo == "ddpg" or (algo == "daddpg" and not agent.value_correction):
        v = target_ddpg(tcs[0], tas[0], s)
    elif algo in ("td3", "ctd3") or not agent.value_correction:
        v = target_td3(tcs, tas[0], s)
    elif algo == "daddpg":
        v = target_daddpg(tcs[0], tas, s)
    else:
        a1 = mlp_forward(tas[0], s)
        a2 = mlp_forward(tas[1], s)
        if algo == "datd3":
            v = target_datd3(tcs, s, a1, a2)
        else:  # darc
            v = soft_target(tcs, s, a1, a2, cfg.nu)
    return float(v[0]) if single else v


# --- Training step ----------------------------------------------------------------


def _bellman(batch: Batch, cfg: TargetConfig, v: np.ndarray) -> np.ndarray:
    return batch.rewards + cfg.gamma * (1.0 - batch.dones) * v


def _step_critic(agent, i, batch, y, lr, other_q=None, lam=0.0):
    loss, grads = critic_loss(agent.critics[i], batch.states, batch.actions, y, other_q, lam)
    adam_step(agent.critics[i], grads, agent.critic_opts[i], lr)
    return loss


def _step_actor(agent, i, critic_i, states, lr):
    mean_q, grads = actor_gradient(agent.actors[i], agent.critics[critic_i], states)
    grads.flat *= -1.0  # adam minimizes; ascend the policy objective
    adam_step(agent.actors[i], grads, agent.actor_opts[i], lr)
    return mean_q


def _soft_pair(agent, i, tau):
    soft_update(agent.target_critics[i], agent.critics[i], tau)
    soft_update(agent.target_actors[i], agent.actors[i], tau)


def _darc_pair_update(agent, i, batch, cfg, rng_target, lr, metrics):
    bound = agent.env_spec.action_bound
    s2 = batch.next_states
    if agent.value_correction:
        a1 = smoothed_target_action(agent.target_actors[0], s2, cfg, rng_target, bound)
        a2 = smoothed_target_action(agent.target_actors[1], s2, cfg, rng_target, bound)
        q1m, q2m = _paired_min_q(agent.target_critics, s2, a1, a2)
        v = cfg.nu * np.minimum(q1m, q2m) + (1.0 - cfg.nu) * np.maximum(q1m, q2m)
    else:
        # exploration-only ablation: pair i bootstraps its own actor's path
        ai = smoothed_target_action(agent.target_actors[i], s2, cfg, rng_target, bound)
        v = clipped_min_q(agent.target_critics, s2, ai)
    y = _bellman(batch, cfg, v)
    other_q = q_values(agent.critics[1 - i], batch.states, batch.actions)
    q_self = q_values(agent.critics[i], batch.states, batch.actions)
    metrics["critic_deviance"] = float((q_self - other_q).mean()) * (1 if i == 0 else -1)
    loss, grads = critic_loss(agent.critics[i], batch.states, batch.actions, y, other_q, cfg.lam)
    adam_step(agent.critics[i], grads, agent.critic_opts[i], lr)
    dev = q_self - other_q
    metrics["td_loss"] = loss - cfg.lam * float(dev @ dev) / len(dev)
    metrics["penalty"] = cfg.lam * float(dev @ dev) / len(dev)
    metrics["target_mean"] = float(np.mean(v))
    _step_actor(agent, i, i, batch.states, lr)
    _soft_pair(agent, i, cfg.tau)


def train_step(
    agent: AgentState,
    buffer: ReplayBuffer,
    cfg: TargetConfig,
    rng_replay: np.random.Generator,
    rng_target: np.random.Generator,
    batch_size: int = 100,
    lr: float = 1e-3,
) -> dict[str, float]:
    """One gradient step of the agent's algorithm. Returns step metrics."""
    algo = agent.algorithm
    parity = agent.step_count % 2
    bound = agent.env_spec.action_bound
    tau = cfg.tau
    metrics: dict[str, float] = {}

    if algo == "ddpg":
        batch = buffer.sample(batch_size, rng_replay)
        v = target_ddpg(agent.target_critics[0], agent.target_actors[0], batch.next_states)
        y = _bellman(batch, cfg, v)
        metrics["td_loss"] = _step_critic(agent, 0, batch, y, lr)
        metrics["target_mean"] = float(np.mean(v))
        _step_actor(agent, 0, 0, batch.states, lr)
        _soft_pair(agent, 0, tau)

    elif algo == "td3":
        batch = buffer.sample(batch_size, rng_replay)
        a = smoothed_target_action(agent.target_actors[0], batch.next_states, cfg, rng_target, bound)
        v = clipped_min_q(agent.target_critics, batch.next_states, a)
        y = _bellman(batch, cfg, v)
        metrics["td_loss"] = _step_critic(agent, 0, batch, y, lr)
        _step_critic(agent, 1, batch, y, lr)
        metrics["target_mean"] = float(np.mean(v))
        if parity == 0:
            _step_actor(agent, 0, 0, batch.states, lr)
            soft_update(agent.target_critics[0], agent.critics[0], tau)
            soft_update(agent.target_critics[1], agent.critics[1], tau)
            soft_update(agent.target_actors[0], agent.actors[0], tau)

    elif algo == "daddpg":
        batch = buffer.sample(batch_size, rng_replay)
        s2 = batch.next_states
        a1 = smoothed_target_action(agent.target_actors[0], s2, cfg, rng_target, bound)
        if agent.value_correction:
            a2 = smoothed_target_action(agent.target_actors[1], s2, cfg, rng_target, bound)
            q1, q2 = _paired_min_q(agent.target_critics[:1], s2, a1, a2)
            v = np.minimum(q1, q2)
        else:
            # exploration-only ablation: drop the two-actor min but keep the
            # smoothed target action of the first actor
            v = q_values(agent.target_critics[0], s2, a1)
        y = _bellman(batch, cfg, v)
        metrics["td_loss"] = _step_critic(agent, 0, batch, y, lr)
        metrics["target_mean"] = float(np.mean(v))
        if parity == 0:
            _step_actor(agent, 0, 0, batch.states, lr)
            soft_update(agent.target_critics[0], agent.critics[0], tau)
            soft_update(agent.target_actors[0], agent.actors[0], tau)
        else:
            _step_actor(agent, 1, 0, batch.states, lr)
            soft_update(agent.target_actors[1], agent.actors[1], tau)

    elif algo == "datd3":
        for i in (0, 1):
            batch = buffer.sample(batch_size, rng_replay)
            s2 = batch.next_states
            if agent.value_correction:
                a1 = smoothed_target_action(agent.target_actors[0], s2, cfg, rng_target, bound)
                a2 = smoothed_target_action(agent.target_actors[1], s2, cfg, rng_target, bound)
                q1m, q2m = _paired_min_q(agent.target_critics, s2, a1, a2)
                v = np.maximum(q1m, q2m)
            else:
                # exploration-only ablation: no cross-actor correction; each
                # pair bootstraps its own actor's smoothed path
                ai = smoothed_target_action(agent.target_actors[i], s2, cfg, rng_target, bound)
                v = clipped_min_q(agent.target_critics, s2, ai)
            y = _bellman(batch, cfg, v)
            metrics["td_loss"] = _step_critic(agent, i, batch, y, lr)
            metrics["target_mean"] = float(np.mean(v))
            _step_actor(agent, i, i, batch.states, lr)
            _soft_pair(agent, i, tau)

    elif algo == "ctd3":
        i = parity
        batch = buffer.sample(batch_size, rng_replay)
        a = smoothed_target_action(agent.target_actors[i], batch.next_states, cfg, rng_target, bound)
        v = clipped_min_q(agent.target_critics, batch.next_states, a)
        y = _bellman(batch, cfg, v)
        metrics["td_loss"] = _step_critic(agent, i, batch, y, lr)
        metrics["target_mean"] = float(np.mean(v))
        _step_actor(agent, i, i, batch.states, lr)
        _soft_pair(agent, i, tau)

    elif algo == "darc":
        if agent.update_scheme == "cross":
            batch = buffer.sample(batch_size, rng_replay)
            _darc_pair_update(agent, parity, batch, cfg, rng_target, lr, metrics)
        else:
            for i in (0, 1):
                batch = buffer.sample(batch_size, rng_replay)
                _darc_pair_update(agent, i, batch, cfg, rng_target, lr, metrics)

    else:
        raise ConfigError(f"unknown algorithm {algo!r}")

    agent.step_count += 1
    return metrics
