"""Desk-scale continuous environments with a uniform reset/step interface.

GoldMiner: a 1-D miner starting at x=0 on the segment [-4, 5] with two gold
mines, one at x=-3 paying +1 and one at x=4 paying +4. Reward is granted
every timestep the post-step position lies inside a mine's closed
half-width-0.5 region. Episodes truncate after 200 steps; the done flag
marks that truncation only (there are no terminal states).

PointReach: a 2-D point mass that integrates a clipped velocity action and
is penalized by its Euclidean distance to the origin each step.

Both environments also expose their transition rules as pure functions of
(state, action), which the class wrappers and the diagnostics rollouts use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class EnvSpec:
    state_dim: int
    action_dim: int
    action_bound: float
    episode_length: int


@dataclass
class StepResult:
    next_state: np.ndarray
    reward: float
    done: bool


# --- GoldMiner -------------------------------------------------------------

GOLDMINER_SPEC = EnvSpec(state_dim=1, action_dim=1, action_bound=1.5, episode_length=200)

_LEFT_MINE = (-3.5, -2.5)   # closed region around x=-3, reward +1
_RIGHT_MINE = (3.5, 4.5)    # closed region around x=4, reward +4
_BOUNDS = (-4.0, 5.0)


@dataclass
class GoldMinerState:
    position: float
    step_index: int


def goldminer_reset() -> GoldMinerState:
    """The miner always starts at position 0."""
    return GoldMinerState(position=0.0, step_index=0)


def goldminer_reward(position: float) -> float:
    if _RIGHT_MINE[0] <= position <= _RIGHT_MINE[1]:
        return 4.0
    if _LEFT_MINE[0] <= position <= _LEFT_MINE[1]:
        return 1.0
    return 0.0


def goldminer_step(state: GoldMinerState, action: float) -> tuple[GoldMinerState, StepResult]:
    """Move by the clipped action, clamp to the segment, pay the mine reward."""
    a = min(max(float(action), -GOLDMINER_SPEC.action_bound), GOLDMINER_SPEC.action_bound)
    pos = min(max(state.position + a, _BOUNDS[0]), _BOUNDS[1])
    nxt = GoldMinerState(position=pos, step_index=state.step_index + 1)
    done = nxt.step_index >= GOLDMINER_SPEC.episode_length
    return nxt, StepResult(np.array([pos]), goldminer_reward(pos), done)


# --- PointReach ------------------------------------------------------------

POINTREACH_SPEC = EnvSpec(state_dim=2, action_dim=2, action_bound=1.0, episode_length=100)

_PR_BOX = 2.0  # positions stay in [-2, 2]^2; goal is the origin


@dataclass
class PointReachState:
    position: np.ndarray
    step_index: int


def pointreach_reset(rng: np.random.Generator) -> PointReachState:
    return PointReachState(position=rng.uniform(-_PR_BOX, _PR_BOX, size=2), step_index=0)


def pointreach_step(state: PointReachState, action) -> tuple[PointReachState, StepResult]:
    a = np.clip(np.asarray(action, dtype=np.float64), -POINTREACH_SPEC.action_bound,
                POINTREACH_SPEC.action_bound)
    pos = np.clip(state.position + a, -_PR_BOX, _PR_BOX)
    nxt = PointReachState(position=pos, step_index=state.step_index + 1)
    done = nxt.step_index >= POINTREACH_SPEC.episode_length
    return nxt, StepResult(pos.copy(), -float(np.linalg.norm(pos)), done)


# --- Visit instrumentation ---------------------------------------------------

@dataclass
class VisitHistogram:
    """Per-episode counters of steps spent in each GoldMiner region."""

    left_mine_visits: int = 0
    right_mine_visits: int = 0
    other_visits: int = 0


def record_visit(hist: VisitHistogram, state: GoldMinerState) -> VisitHistogram:
    """Increment the counter for the region the state's position falls in."""
    if _RIGHT_MINE[0] <= state.position <= _RIGHT_MINE[1]:
        hist.right_mine_visits += 1
    elif _LEFT_MINE[0] <= state.position <= _LEFT_MINE[1]:
        hist.left_mine_visits += 1
    else:
        hist.other_visits += 1
    return hist


# --- Class wrappers ----------------------------------------------------------

class GoldMiner:
    """Stateful wrapper over the pure GoldMiner transition rule."""

    spec = GOLDMINER_SPEC

    def __init__(self):
        self.state = goldminer_reset()

    def reset(self, rng: np.random.Generator | None = None) -> np.ndarray:
        self.state = goldminer_reset()
        return np.array([self.state.position])

    def step(self, action) -> StepResult:
        self.state, result = goldminer_step(self.state, np.asarray(action).reshape(-1)[0])
        return result

    def set_state(self, obs) -> np.ndarray:
        """Force an arbitrary position with a fresh step budget (diagnostics)."""
        pos = float(np.asarray(obs).reshape(-1)[0])
        self.state = GoldMinerState(position=min(max(pos, _BOUNDS[0]), _BOUNDS[1]), step_index=0)
        return np.array([self.state.position])


class PointReach:
    spec = POINTREACH_SPEC

    def __init__(self):
        self.state = PointReachState(position=np.zeros(2), step_index=0)

    def reset(self, rng: np.random.Generator | None = None) -> np.ndarray:
        if rng is None:
            raise ValueError("pointreach reset draws its start position and needs an rng")
        self.state = pointreach_reset(rng)
        return self.state.position.copy()

    def step(self, action) -> StepResult:
        self.state, result = pointreach_step(self.state, action)
        return result

    def set_state(self, obs) -> np.ndarray:
        pos = np.clip(np.asarray(obs, dtype=np.float64).reshape(2), -_PR_BOX, _PR_BOX)
        self.state = PointReachState(position=pos, step_index=0)
        return pos.copy()


ENV_NAMES = ("goldminer", "pointreach")


def make_env(name: str):
    if name == "goldminer":
        return GoldMiner()
    if name == "pointreach":
        return PointReach()
    raise ConfigError(f"unknown environment {name!r}; expected one of {ENV_NAMES}")
