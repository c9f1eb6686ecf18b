"""Fixed-capacity experience store with uniform sampling.

Preallocated ring arrays; once full, the oldest entries are overwritten.
Sampling draws indices uniformly with replacement, so a batch is an i.i.d.
sample of the stored distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Transition:
    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    done: bool


@dataclass
class Batch:
    """Column-stacked transitions: states (n,ds), actions (n,da), rewards (n,), ..."""

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    dones: np.ndarray

    def __len__(self) -> int:
        return len(self.rewards)


class BufferNotReady(RuntimeError):
    """Raised when sampling from an empty buffer."""


class ReplayBuffer:
    def __init__(self, capacity: int, state_dim: int, action_dim: int):
        if capacity < 1:
            raise ValueError(f"capacity must be positive, got {capacity}")
        self.capacity = capacity
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros((capacity, action_dim))
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_dim))
        self.dones = np.zeros(capacity)
        self.write_cursor = 0
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def push(self, transition: Transition) -> None:
        s = np.asarray(transition.state, dtype=np.float64).reshape(-1)
        a = np.asarray(transition.action, dtype=np.float64).reshape(-1)
        s2 = np.asarray(transition.next_state, dtype=np.float64).reshape(-1)
        if s.shape != (self.state_dim,) or s2.shape != (self.state_dim,):
            raise ValueError(f"state dims {s.shape}/{s2.shape} do not match buffer ({self.state_dim},)")
        if a.shape != (self.action_dim,):
            raise ValueError(f"action dim {a.shape} does not match buffer ({self.action_dim},)")
        i = self.write_cursor
        self.states[i] = s
        self.actions[i] = a
        self.rewards[i] = transition.reward
        self.next_states[i] = s2
        self.dones[i] = float(transition.done)
        self.write_cursor = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, n: int, rng: np.random.Generator) -> Batch:
        """n uniform draws with replacement from the stored entries."""
        if self.size == 0:
            raise BufferNotReady("cannot sample from an empty buffer")
        idx = rng.integers(0, self.size, size=n)
        return Batch(
            self.states[idx],
            self.actions[idx],
            self.rewards[idx],
            self.next_states[idx],
            self.dones[idx],
        )
