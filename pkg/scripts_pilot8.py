"""Pilot 8: td3/datd3 warmup sensitivity around the underexploration regime."""
import json
import time

from darclab.harness import RunConfig, run_training

results = {}
t00 = time.time()
jobs = [
    ("td3_w50", "td3", True, 30000, 50),
    ("datd3_w50", "datd3", False, 30000, 50),
    ("td3_w150", "td3", True, 30000, 150),
    ("datd3_w150", "datd3", False, 30000, 150),
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
        })
        print(name, seed, rows[-1]["final"], rows[-1]["right"], flush=True)
    results[name] = rows
    json.dump(results, open("/root/pkg/pilot8.json", "w"), indent=1)
print("total", round(time.time() - t00, 1))
