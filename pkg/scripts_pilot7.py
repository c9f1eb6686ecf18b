"""Pilot 7: criterion-8 protocol at learning rates that reach the
overestimation regime within desk-scale budgets."""
import json
import time

import numpy as np

from darclab.agents import (
    ExplorationConfig, TargetConfig, estimator_value, make_agent, select_action, train_step,
)
from darclab.diagnostics import estimate_bias
from darclab.envs import make_env
from darclab.replay import ReplayBuffer, Transition
from darclab.seeding import Streams


def paired_bias_run(seed, lr, total_steps, warmup=1000, interval=2000):
    env_d, env_a = make_env("goldminer"), make_env("goldminer")
    spec = env_d.spec
    st_d, st_a = Streams(seed), Streams(seed + 500_000)
    ddpg = make_agent("ddpg", spec, (64, 64), st_d.init)
    daddpg = make_agent("daddpg", spec, (64, 64), st_a.init)
    cfg = TargetConfig()
    expl = ExplorationConfig(0.1, "maxq")
    bufs = {"d": ReplayBuffer(10**6, 1, 1), "a": ReplayBuffer(10**6, 1, 1)}
    obs = {"d": env_d.reset(st_d.env), "a": env_a.reset(st_a.env)}
    rows = []
    for t in range(total_steps):
        for key, agent, env, st in (("d", ddpg, env_d, st_d), ("a", daddpg, env_a, st_a)):
            if t < warmup:
                act = st.explore.uniform(-spec.action_bound, spec.action_bound, spec.action_dim)
            else:
                act = select_action(agent, obs[key], expl, st.explore)
            res = env.step(act)
            bufs[key].push(Transition(obs[key], act, res.reward, res.next_state, res.done))
            obs[key] = res.next_state if not res.done else env.reset(st.env)
            if t >= warmup:
                train_step(agent, bufs[key], cfg, st.replay, st.target, lr=lr)
        if t + 1 > warmup and (t + 1 - warmup) % interval == 0:
            states = bufs["d"].sample(256, st_d.diag).states
            rep = estimate_bias(ddpg, bufs["d"], env_d, cfg, horizon=200, states=states)
            est_da = float(np.mean(estimator_value(daddpg, states, cfg)))
            rows.append({"t": t + 1, "bias": rep.bias, "est_d": rep.mean_estimate,
                         "est_a": est_da, "true": rep.mean_true_value})
    return rows

results = {}
t00 = time.time()
for lr, steps in ((3e-3, 40000), (2e-3, 40000)):
    per = {}
    for seed in range(1, 6):
        rows = paired_bias_run(seed, lr, steps)
        per[seed] = rows
        b = [r["bias"] for r in rows]
        leq = np.mean([r["est_a"] <= r["est_d"] for r in rows])
        print(f"lr={lr} seed={seed}: median={np.median(b):.1f} leq={leq:.2f}", flush=True)
    results[f"lr{lr}"] = per
    pooled = [r for rows in per.values() for r in rows]
    print(f"lr={lr} POOLED: median={np.median([r['bias'] for r in pooled]):.2f} "
          f"leq={np.mean([r['est_a'] <= r['est_d'] for r in pooled]):.3f}", flush=True)
    json.dump(results, open("/root/pkg/pilot7.json", "w"), indent=1)
print("total", round(time.time() - t00, 1))
