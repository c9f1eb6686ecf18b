"""Pilot 3: criterion-7 deviance reduction and criterion-8 paired bias protocols."""
import json
import time

import numpy as np

from darclab.agents import (
    ExplorationConfig, TargetConfig, estimator_value, make_agent, select_action, train_step,
)
from darclab.diagnostics import critic_deviance, estimate_bias
from darclab.envs import make_env
from darclab.harness import RunConfig, run_training
from darclab.replay import ReplayBuffer, Transition
from darclab.seeding import Streams

results = {"deviance": {}, "bias": {}}
t00 = time.time()

# --- criterion 7 protocol: mean abs deviance on a 1000-sample batch ---
for env_name in ("goldminer", "pointreach"):
    for lam in (0.005, 0.0):
        rows = []
        for seed in range(1, 6):
            cfg = RunConfig(algorithm="darc", env=env_name, seed=seed, total_steps=30000,
                            warmup_steps=1000, eval_interval=15000, lam=lam)
            rec, agent, buffer = run_training(cfg, return_state=True)
            batch = buffer.sample(1000, np.random.default_rng(999))
            dev = critic_deviance(agent, batch)
            rows.append({"seed": seed, "final": rec.final_score,
                         "mean_abs": dev.mean_abs, "signed": dev.signed_mean})
            print(env_name, lam, seed, f"dev={dev.mean_abs:.4f}", f"final={rec.final_score:.0f}", flush=True)
        results["deviance"][f"{env_name}_lam{lam}"] = rows
        json.dump(results, open("/root/pkg/pilot3.json", "w"), indent=1)

# --- criterion 8 protocol: paired DDPG / DADDPG bias over shared states ---
def paired_bias_run(seed, total_steps=60000, warmup=1000, interval=2000):
    env_ddpg, env_da = make_env("goldminer"), make_env("goldminer")
    spec = env_ddpg.spec
    st_d, st_a = Streams(seed), Streams(10_000 + seed)
    ddpg = make_agent("ddpg", spec, (64, 64), st_d.init)
    daddpg = make_agent("daddpg", spec, (64, 64), st_a.init)
    cfg = TargetConfig()
    expl = ExplorationConfig(0.1, "maxq")
    buf_d = ReplayBuffer(10**6, 1, 1)
    buf_a = ReplayBuffer(10**6, 1, 1)
    rows = []
    obs_d = env_ddpg.reset(st_d.env)
    obs_a = env_da.reset(st_a.env)
    for t in range(total_steps):
        for agent, env, buf, st, obs_name in (
            (ddpg, env_ddpg, buf_d, st_d, "d"),
            (daddpg, env_da, buf_a, st_a, "a"),
        ):
            obs = obs_d if obs_name == "d" else obs_a
            if t < warmup:
                act = st.explore.uniform(-spec.action_bound, spec.action_bound, spec.action_dim)
            else:
                act = select_action(agent, obs, expl, st.explore)
            r = env.step(act)
            buf.push(Transition(obs, act, r.reward, r.next_state, r.done))
            nxt = r.next_state if not r.done else env.reset(st.env)
            if obs_name == "d":
                obs_d = nxt
            else:
                obs_a = nxt
            if t >= warmup:
                train_step(agent, buf, cfg, st.replay, st.target)
        if t + 1 > warmup and (t + 1 - warmup) % interval == 0:
            states = buf_d.sample(256, st_d.diag).states
            rep = estimate_bias(ddpg, buf_d, env_ddpg, cfg, horizon=200, states=states)
            est_da = float(np.mean(estimator_value(daddpg, states, cfg)))
            rows.append({"t": t + 1, "bias_ddpg": rep.bias,
                         "est_ddpg": rep.mean_estimate, "est_daddpg": est_da,
                         "true_ddpg": rep.mean_true_value})
    return rows

for seed in range(1, 6):
    t0 = time.time()
    rows = paired_bias_run(seed)
    results["bias"][seed] = rows
    biases = [r["bias_ddpg"] for r in rows]
    leq = np.mean([r["est_daddpg"] <= r["est_ddpg"] for r in rows])
    print(f"seed {seed}: median_bias={np.median(biases):.1f} "
          f"leq_frac={leq:.2f} ({time.time()-t0:.0f}s)", flush=True)
    json.dump(results, open("/root/pkg/pilot3.json", "w"), indent=1)

print("total", round(time.time() - t00, 1))
