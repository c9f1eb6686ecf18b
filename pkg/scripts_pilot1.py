"""Pilot at acceptance configuration: ddpg vs daddpg-explonly at 50k, td3 vs datd3-explonly at 30k."""
import json
import time

from darclab.harness import RunConfig, run_training

results = {}
t00 = time.time()
for name, algo, vc, steps in (
    ("ddpg50", "ddpg", True, 50000),
    ("daddpg50", "daddpg", False, 50000),
    ("td3_30", "td3", True, 30000),
    ("datd3_30", "datd3", False, 30000),
):
    rows = []
    for seed in range(1, 11):
        t0 = time.time()
        cfg = RunConfig(algorithm=algo, env="goldminer", seed=seed, total_steps=steps,
                        warmup_steps=1000, eval_interval=2500, value_correction=vc)
        rec = run_training(cfg)
        rows.append({
            "seed": seed,
            "final": rec.final_score,
            "right": sum(r.right for r in rec.visit_rows),
            "left": sum(r.left for r in rec.visit_rows),
            "curve": [r.mean_return for r in rec.eval_rows],
            "secs": round(time.time() - t0, 1),
        })
        print(name, seed, rows[-1]["final"], rows[-1]["right"], f"{rows[-1]['secs']}s", flush=True)
    results[name] = rows
    json.dump(results, open("/root/pkg/pilot1.json", "w"), indent=1)
print("total", round(time.time() - t00, 1))
