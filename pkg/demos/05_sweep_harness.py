"""Run a small experiment grid and read the results CSV.

The sweep crosses decoders, sketch sizes and bandwidths over repeated
sketch seeds, scores every decode against a shared Lloyd baseline, and
writes one CSV row per decode.  The same config can be run from the shell:

    cskit sweep --config config.json --out results.csv
"""

import csv
import json

import numpy as np

from cskit.sweep import ExperimentConfig, run_sweep

config = {
    "dataset": {"generate": {"separated": {"k": 3, "d": 2, "seed": 8}, "n": 4000, "seed": 2}},
    "k": 3,
    "T": 6,
    "m": [100, 1000],
    "sigma": [0.1, 0.3],
    "L": [50],
    "decoders": ["proposed-meanshift", "clompr"],
    "models": ["dirac"],
    "repetitions": 3,
    "lloyd": {"n_init": 5, "seed": 0},
}
with open("/tmp/demo_sweep_config.json", "w") as fh:
    json.dump(config, fh, indent=2)

rows = run_sweep(ExperimentConfig.from_dict(config), out_path="/tmp/demo_sweep.csv")
print(f"wrote {len(rows)} rows to /tmp/demo_sweep.csv\n")

print(f"{'decoder':>18} | {'m':>5} | {'sigma':>5} | {'median RSE':>10}")
for decoder in ("proposed-meanshift", "clompr"):
    for m in (100, 1000):
        for sigma in (0.1, 0.3):
            values = [
                float(r["rse"])
                for r in rows
                if r["decoder"] == decoder
                and r["m"] == m
                and r["sigma"] == sigma
                and not r["error"]
            ]
            print(f"{decoder:>18} | {m:>5} | {sigma:>5} | {np.median(values):>10.3f}")

with open("/tmp/demo_sweep.csv") as fh:
    header = next(csv.reader(fh))
print(f"\nCSV columns: {', '.join(header)}")
