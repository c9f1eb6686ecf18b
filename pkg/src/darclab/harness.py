"""Seeded end-to-end experiment execution.

A run is fully determined by its RunConfig: one master seed feeds the named
rng streams in `seeding`, so identical configs yield byte-identical output
files. Training interleaves act/store/train; evaluation episodes run a
deterministic policy on separate environment instances and never touch the
replay buffer or the networks.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .agents import (
    ALGORITHMS,
    AgentState,
    ExplorationConfig,
    TargetConfig,
    make_agent,
    policy_actions,
    select_action,
    train_step,
)
from .diagnostics import estimate_bias, improvement_metric, improvement_percent
from .envs import ENV_NAMES, VisitHistogram, make_env, record_visit
from .errors import ConfigError
from .replay import ReplayBuffer, Transition
from .seeding import Streams
from .svgplot import render_curve


@dataclass
class RunConfig:
    algorithm: str = "darc"
    env: str = "goldminer"
    seed: int = 1
    total_steps: int = 50_000
    warmup_steps: int = 1_000
    eval_interval: int = 1_000
    eval_episodes: int = 10
    batch_size: int = 100
    learning_rate: float = 1e-3
    gamma: float = 0.99
    tau: float = 0.005
    nu: float = 0.25
    lam: float = 0.005
    target_noise_std: float = 0.2
    noise_clip: float = 0.5
    action_noise_std: float = 0.1
    exploration_mode: str = "maxq"
    hidden_sizes: tuple[int, ...] = (64, 64)
    buffer_capacity: int = 1_000_000
    update_scheme: str = "cross"
    value_correction: bool = True
    bias_interval: int = 0  # 0 disables periodic bias measurement
    bias_states: int = 256
    bias_horizon: int = 200
    out_dir: str | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.env not in ENV_NAMES:
            raise ConfigError(f"unknown environment {self.env!r}; expected one of {ENV_NAMES}")
        if self.total_steps < self.warmup_steps:
            raise ConfigError(
                f"total_steps ({self.total_steps}) must be >= warmup_steps ({self.warmup_steps})"
            )
        if self.total_steps < 0 or self.warmup_steps < 0:
            raise ConfigError("step counts must be non-negative")
        if self.eval_interval <= 0:
            raise ConfigError(f"eval_interval must be positive, got {self.eval_interval}")
        if self.eval_episodes < 1:
            raise ConfigError(f"eval_episodes must be >= 1, got {self.eval_episodes}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.bias_interval < 0 or self.bias_states < 1 or self.bias_horizon < 1:
            raise ConfigError("bias measurement settings must be positive")
        self.hidden_sizes = tuple(int(h) for h in self.hidden_sizes)
        # constructing these validates the remaining fields eagerly
        self.target_config()
        self.exploration_config()

    def target_config(self) -> TargetConfig:
        return TargetConfig(
            nu=self.nu,
            lam=self.lam,
            target_noise_std=self.target_noise_std,
            noise_clip=self.noise_clip,
            gamma=self.gamma,
            tau=self.tau,
        )

    def exploration_config(self) -> ExplorationConfig:
        return ExplorationConfig(self.action_noise_std, self.exploration_mode)


_BOOL_STRINGS = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def _parse_value(name: str, text: str, py_type):
    text = text.strip()
    if py_type is bool:
        if text.lower() not in _BOOL_STRINGS:
            raise ConfigError(f"cannot parse boolean {name}={text!r}")
        return _BOOL_STRINGS[text.lower()]
    if py_type is int:
        return int(text)
    if py_type is float:
        return float(text)
    if name == "hidden_sizes":
        return tuple(int(p) for p in text.replace("(", "").replace(")", "").split(",") if p.strip())
    if name == "out_dir":
        return text or None
    return text


def load_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    """Read a flat ``key = value`` file, apply overrides, build a RunConfig."""
    values: dict = {}
    types = {f.name: f.type for f in dataclasses.fields(RunConfig)}
    base = {f.name: f for f in dataclasses.fields(RunConfig)}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, text = (part.strip() for part in line.split("=", 1))
        if key not in base:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        py_type = {"int": int, "float": float, "bool": bool, "str": str}.get(
            str(types[key]).split("|")[0].strip(), str
        )
        values[key] = _parse_value(key, text, py_type)
    if overrides:
        values.update(overrides)
    return RunConfig(**values)


def config_from_overrides(overrides: dict) -> RunConfig:
    return RunConfig(**overrides)


# --- Records ------------------------------------------------------------------


@dataclass
class EvalRow:
    step: int
    mean_return: float
    std_return: float


@dataclass
class BiasRow:
    step: int
    mean_estimate: float
    mean_true: float
    bias: float


@dataclass
class VisitRow:
    episode: int
    left: int
    right: int
    other: int


@dataclass
class RunRecord:
    config: RunConfig
    eval_rows: list[EvalRow] = field(default_factory=list)
    bias_rows: list[BiasRow] = field(default_factory=list)
    visit_rows: list[VisitRow] = field(default_factory=list)
    final_score: float = float("nan")


def evaluate_policy(agent: AgentState, env_name: str, episodes: int, rng_eval) -> tuple[float, float]:
    """Mean and population std of returns over deterministic evaluation episodes.

    Episodes run in lockstep on independent environment instances so the
    policy can be evaluated in one batched forward per timestep.
    """
    envs = [make_env(env_name) for _ in range(episodes)]
    obs = np.stack([e.reset(rng_eval) for e in envs])
    returns = np.zeros(episodes)
    done = False
    while not done:
        actions = policy_actions(agent, obs, mode="maxq")
        for j, e in enumerate(envs):
            r = e.step(actions[j])
            returns[j] += r.reward
            obs[j] = r.next_state
            done = r.done  # fixed episode lengths: all instances truncate together
    return float(returns.mean()), float(returns.std())


def run_training(cfg: RunConfig, return_state: bool = False):
    """Execute one seeded run: warmup, train, periodic evaluation.

    Returns the RunRecord, or (record, agent, buffer) when ``return_state``
    is set (for post-run diagnostics over the trained agent).
    """
    streams = Streams(cfg.seed)
    env = make_env(cfg.env)
    spec = env.spec
    agent = make_agent(
        cfg.algorithm,
        spec,
        cfg.hidden_sizes,
        streams.init,
        value_correction=cfg.value_correction,
        update_scheme=cfg.update_scheme,
    )
    tcfg = cfg.target_config()
    expl = cfg.exploration_config()
    buffer = ReplayBuffer(cfg.buffer_capacity, spec.state_dim, spec.action_dim)
    record = RunRecord(config=cfg)

    track_visits = cfg.env == "goldminer"
    hist = VisitHistogram()
    episode = 0

    obs = env.reset(streams.env)
    for t in range(cfg.total_steps):
        if t < cfg.warmup_steps:
            action = streams.explore.uniform(-spec.action_bound, spec.action_bound, spec.action_dim)
        else:
            action = select_action(agent, obs, expl, streams.explore)
        result = env.step(action)
        buffer.push(Transition(obs, action, result.reward, result.next_state, result.done))
        if track_visits:
            record_visit(hist, env.state)
        obs = result.next_state
        if result.done:
            if track_visits:
                record.visit_rows.append(
                    VisitRow(episode, hist.left_mine_visits, hist.right_mine_visits, hist.other_visits)
                )
                hist = VisitHistogram()
            episode += 1
            obs = env.reset(streams.env)

        if t >= cfg.warmup_steps:
            train_step(agent, buffer, tcfg, streams.replay, streams.target,
                       cfg.batch_size, cfg.learning_rate)

        if (t + 1) % cfg.eval_interval == 0:
            mean, std = evaluate_policy(agent, cfg.env, cfg.eval_episodes, streams.eval)
            record.eval_rows.append(EvalRow(t + 1, mean, std))

        if (
            cfg.bias_interval > 0
            and t + 1 > cfg.warmup_steps
            and (t + 1 - cfg.warmup_steps) % cfg.bias_interval == 0
        ):
            rep = estimate_bias(
                agent, buffer, env, tcfg,
                n_states=min(cfg.bias_states, len(buffer)),
                horizon=cfg.bias_horizon,
                rng=streams.diag,
            )
            record.bias_rows.append(BiasRow(t + 1, rep.mean_estimate, rep.mean_true_value, rep.bias))

    if record.eval_rows:
        record.final_score = record.eval_rows[-1].mean_return
    if return_state:
        return record, agent, buffer
    return record


# --- Post-processing -----------------------------------------------------------


def smooth(series, window: int):
    """Trailing-window mean; element k averages elements max(0, k-window+1)..k."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    out = []
    values = list(series)
    for k in range(len(values)):
        lo = max(0, k - window + 1)
        out.append(sum(values[lo : k + 1]) / (k + 1 - lo))
    return out


@dataclass
class AggregateRecord:
    steps: list[int]
    mean_curve: list[float]
    std_curve: list[float]
    final_scores: list[float]
    final_mean: float
    final_std: float


def aggregate(records: list[RunRecord]) -> AggregateRecord:
    """Pointwise mean and population std across runs sharing one step grid."""
    if not records:
        raise ValueError("nothing to aggregate")
    grids = [[row.step for row in r.eval_rows] for r in records]
    if any(g != grids[0] for g in grids[1:]):
        raise ValueError("records have mismatched evaluation step grids")
    curves = np.array([[row.mean_return for row in r.eval_rows] for r in records])
    finals = [r.final_score for r in records]
    if curves.size:
        mean_curve = curves.mean(axis=0).tolist()
        std_curve = curves.std(axis=0).tolist()
    else:
        mean_curve, std_curve = [], []
    return AggregateRecord(
        steps=grids[0],
        mean_curve=mean_curve,
        std_curve=std_curve,
        final_scores=finals,
        final_mean=float(np.mean(finals)) if finals else float("nan"),
        final_std=float(np.std(finals)) if finals else float("nan"),
    )


# --- Output emission -------------------------------------------------------------


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _config_dict(cfg: RunConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["hidden_sizes"] = list(cfg.hidden_sizes)
    return d


def emit_outputs(record: RunRecord | AggregateRecord, out_dir: str | Path) -> list[Path]:
    """Write curve.csv / bias.csv / visits.csv / summary.json / curve.svg."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    if isinstance(record, AggregateRecord):
        curve_rows = list(zip(record.steps, record.mean_curve, record.std_curve))
        summary = {
            "final_scores": record.final_scores,
            "final_mean": record.final_mean,
            "final_std": record.final_std,
            "n_runs": len(record.final_scores),
        }
        bias_rows, visit_rows = [], []
        title = "aggregate"
        steps, mean_c, std_c = record.steps, record.mean_curve, record.std_curve
    else:
        curve_rows = [(r.step, r.mean_return, r.std_return) for r in record.eval_rows]
        bias_rows = [(r.step, r.mean_estimate, r.mean_true, r.bias) for r in record.bias_rows]
        visit_rows = [(r.episode, r.left, r.right, r.other) for r in record.visit_rows]
        summary = {
            "config": _config_dict(record.config),
            "final_score": record.final_score,
            "n_evaluations": len(record.eval_rows),
        }
        title = f"{record.config.algorithm} on {record.config.env} (seed {record.config.seed})"
        steps = [r.step for r in record.eval_rows]
        mean_c = [r.mean_return for r in record.eval_rows]
        std_c = [r.std_return for r in record.eval_rows]

    path = out / "curve.csv"
    _write_csv(path, ["step", "mean_return", "std_return"], curve_rows)
    written.append(path)
    path = out / "bias.csv"
    _write_csv(path, ["step", "mean_estimate", "mean_true", "bias"], bias_rows)
    written.append(path)
    path = out / "visits.csv"
    _write_csv(path, ["episode", "left", "right", "other"], visit_rows)
    written.append(path)
    path = out / "summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True, allow_nan=True) + "\n")
    written.append(path)
    path = out / "curve.svg"
    path.write_text(render_curve(steps, mean_c, std_c, title=title))
    written.append(path)
    return written


# --- Sweeps ------------------------------------------------------------------------


def _sweep_one(args) -> RunRecord:
    return run_training(args)


def run_sweep(
    base: RunConfig,
    algorithms: list[str],
    seeds: list[int],
    out_dir: str | Path,
    workers: int = 1,
) -> dict:
    """Cross-product of algorithms x seeds; writes per-run and per-algorithm
    outputs plus a cross-algorithm improvement table (first algorithm is the
    baseline)."""
    out = Path(out_dir)
    configs = {
        algo: [dataclasses.replace(base, algorithm=algo, seed=s, out_dir=None) for s in seeds]
        for algo in algorithms
    }
    records: dict[str, list[RunRecord]] = {}
    for algo, cfgs in configs.items():
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                records[algo] = list(pool.map(_sweep_one, cfgs))
        else:
            records[algo] = [run_training(c) for c in cfgs]
        for cfg, rec in zip(cfgs, records[algo]):
            emit_outputs(rec, out / algo / f"seed_{cfg.seed}")
        emit_outputs(aggregate(records[algo]), out / algo)

    baseline = algorithms[0]
    base_mean = aggregate(records[baseline]).final_mean
    summary: dict = {
        "baseline": baseline,
        "environment": base.env,
        "seeds": list(seeds),
        "algorithms": {},
    }
    for algo in algorithms:
        agg = aggregate(records[algo])
        entry = {
            "final_scores": agg.final_scores,
            "final_mean": agg.final_mean,
            "final_std": agg.final_std,
        }
        if base_mean != 0.0:
            v = improvement_metric([base_mean], [agg.final_mean])
            entry["improvement"] = v
            entry["improvement_percent"] = improvement_percent(v)
        summary["algorithms"][algo] = entry
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary
