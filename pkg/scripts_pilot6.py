"""Pilot 6: lambda sensitivity for the deviance-reduction machinery."""
import json
import time

import numpy as np

from darclab.diagnostics import critic_deviance
from darclab.harness import RunConfig, run_training

results = {}
t00 = time.time()
for env_name in ("pointreach", "goldminer"):
    for lam in (0.0, 0.005, 0.05, 0.5):
        devs = []
        for seed in (1, 2, 3):
            cfg = RunConfig(algorithm="darc", env=env_name, seed=seed, total_steps=15000,
                            warmup_steps=1000, eval_interval=20000, lam=lam)
            _, agent, buffer = run_training(cfg, return_state=True)
            batch = buffer.sample(1000, np.random.default_rng(5))
            devs.append(critic_deviance(agent, batch).mean_abs)
        results[f"{env_name}_lam{lam}"] = devs
        print(f"{env_name:10s} lam={lam:<6} devs={[f'{d:.4f}' for d in devs]}", flush=True)
        json.dump(results, open("/root/pkg/pilot6.json", "w"), indent=1)
print("total", round(time.time() - t00, 1))
