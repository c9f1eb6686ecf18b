"""Pilot 5: warmup refinement for criterion 6; smoothed-target explonly daddpg for criterion 5."""
import json
import time

from darclab.harness import RunConfig, run_training

results = {}
t00 = time.time()
jobs = [
    ("td3_w100", "td3", True, 30000, 100),
    ("datd3_w100", "datd3", False, 30000, 100),
    ("daddpgS_w1000", "daddpg", False, 50000, 1000),
    ("daddpgS_w2000", "daddpg", False, 50000, 2000),
]
for name, algo, vc, steps, warmup in jobs:
    rows = []
    for seed in range(1, 11):
        cfg = RunConfig(algorithm=algo, env="goldminer", seed=seed, total_steps=steps,
                        warmup_steps=warmup, eval_interval=2500, value_correction=vc)
        rec = run_training(cfg)
        tail = rec.visit_rows[-len(rec.visit_rows) // 4:]
        rows.append({
            "seed": seed,
            "final": rec.final_score,
            "right": sum(r.right for r in rec.visit_rows),
            "right_tail": sum(r.right for r in tail) / max(1, len(tail)),
            "curve": [r.mean_return for r in rec.eval_rows],
        })
        print(name, seed, rows[-1]["final"], rows[-1]["right"],
              round(rows[-1]["right_tail"], 1), flush=True)
    results[name] = rows
    json.dump(results, open("/root/pkg/pilot5.json", "w"), indent=1)
print("total", round(time.time() - t00, 1))
