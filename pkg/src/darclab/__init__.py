"""darclab: a desk-scale continuous-control laboratory for the double-actor
family of deterministic policy-gradient algorithms (DDPG, TD3, DADDPG,
DATD3, CTD3, DARC), with bias and critic-deviance diagnostics and a seeded
experiment harness."""

import os as _os

# The workload is many small dense matmuls; BLAS thread fan-out costs more
# than it saves at these sizes. Respect explicit user settings.
for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    _os.environ.setdefault(_var, "1")

from .agents import (
    ALGORITHMS,
    AgentState,
    ExplorationConfig,
    TargetConfig,
    make_agent,
    select_action,
    soft_target,
    target_daddpg,
    target_datd3,
    target_ddpg,
    target_td3,
    train_step,
)
from .diagnostics import (
    BiasReport,
    ErrorTriple,
    critic_deviance,
    deviance_reduction,
    error_triple,
    estimate_bias,
    improvement_metric,
)
from .envs import EnvSpec, GoldMiner, PointReach, StepResult, VisitHistogram, make_env, record_visit
from .errors import ConfigError, NumericalError, UnsupportedError
from .harness import RunConfig, RunRecord, aggregate, emit_outputs, run_sweep, run_training, smooth
from .neural import AdamState, GradientSet, Mlp, adam_init, adam_step, mlp_backward, mlp_forward, mlp_init, soft_update
from .replay import Batch, ReplayBuffer, Transition

__version__ = "0.1.0"
