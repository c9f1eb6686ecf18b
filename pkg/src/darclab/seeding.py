"""Deterministic random-stream derivation.

Every run consumes randomness through named streams derived from one master
seed. Each stream is an independent Philox4x64 counter-based generator whose
128-bit key is ``(master_seed << 64) | STREAM_IDS[name]``, so two runs with
the same seed replay bit-identical random sequences regardless of platform,
and adding draws to one stream never shifts another.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError

# Stream identifiers. Renumbering breaks reproducibility of stored results.
STREAM_IDS = {
    "init": 0,      # network parameter initialization
    "env": 1,       # environment stochasticity (resets)
    "explore": 2,   # warmup actions and exploration noise
    "target": 3,    # target-policy smoothing noise
    "replay": 4,    # minibatch index draws
    "eval": 5,      # evaluation-episode environment resets
    "diag": 6,      # diagnostic state sampling (bias measurement)
}


def stream(master_seed: int, name: str) -> np.random.Generator:
    """Return the named Philox stream for this master seed."""
    if name not in STREAM_IDS:
        raise ConfigError(f"unknown rng stream {name!r}")
    if not 0 <= master_seed < 2**63:
        raise ConfigError(f"seed must be in [0, 2**63), got {master_seed}")
    key = (int(master_seed) << 64) | STREAM_IDS[name]
    return np.random.Generator(np.random.Philox(key=key))


class Streams:
    """All named streams for one run, derived once from the master seed."""

    def __init__(self, master_seed: int):
        self.seed = master_seed
        for name in STREAM_IDS:
            setattr(self, name, stream(master_seed, name))
