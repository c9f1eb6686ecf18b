"""Pilot 4: short-warmup regime where self-exploration dominates."""
import json
import time

from darclab.harness import RunConfig, run_training

results = {}
t00 = time.time()
jobs = [
    ("td3_w300", "td3", True, 30000, 300),
    ("datd3_w300", "datd3", False, 30000, 300),
    ("ddpg_w300", "ddpg", True, 50000, 300),
    ("daddpg_w300", "daddpg", False, 50000, 300),
]
for name, algo, vc, steps, warmup in jobs:
    rows = []
    for seed in range(1, 11):
        cfg = RunConfig(algorithm=algo, env="goldminer", seed=seed, total_steps=steps,
                        warmup_steps=warmup, eval_interval=2500, value_correction=vc)
        rec = run_training(cfg)
        rows.append({
            "seed": seed,
            "final": rec.final_score,
            "right": sum(r.right for r in rec.visit_rows),
            "left": sum(r.left for r in rec.visit_rows),
            "curve": [r.mean_return for r in rec.eval_rows],
        })
        print(name, seed, rows[-1]["final"], rows[-1]["right"], flush=True)
    results[name] = rows
    json.dump(results, open("/root/pkg/pilot4.json", "w"), indent=1)
print("total", round(time.time() - t00, 1))
