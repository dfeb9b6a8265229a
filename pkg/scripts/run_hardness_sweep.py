#!/usr/bin/env python3
"""Hardness-vs-strength sweep on no-augmentation baseline policies.

Trains the baselines if the policy files are missing, then runs
`rlaug sweep-hardness` and prints the pooled correlation line.
"""

import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

BASE = """\
seeds: [{seeds}]
total_env_steps: {steps}
warmup_steps: 1000
update_every: 4
batch_size: 32
replay_capacity: 10000
eval_every: {steps}
eval_episodes: 10
lr: 0.001
actor_lr: 0.0003
stddev_end: 0.2
stddev_fraction: 1.0
augmentation: none
"""


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/hardness")
    ap.add_argument("--seeds", default="0,1,2,3,4")
    ap.add_argument("--steps", type=int, default=30_000)
    ap.add_argument("--op", default="translate_hd")
    ap.add_argument("--strengths", default="0,2,4,8,12")
    ap.add_argument("--parallel-seeds", type=int, default=2)
    args = ap.parse_args()

    out_root = Path(args.out)
    out_root.mkdir(parents=True, exist_ok=True)
    baseline_dir = out_root / "baseline"
    seeds = [int(s) for s in args.seeds.split(",")]
    missing = [s for s in seeds if not (baseline_dir / f"policy_seed{s}.npz").exists()]
    if missing:
        cfg_path = out_root / "baseline.yaml"
        cfg_path.write_text(BASE.format(seeds=args.seeds, steps=args.steps))
        print("== training baseline policies (no augmentation) ==", flush=True)
        subprocess.run(
            [sys.executable, "-m", "rlaug.cli", "train", "--config", str(cfg_path),
             "--out", str(baseline_dir), "--parallel-seeds", str(args.parallel_seeds)],
            check=True,
        )
    csv_path = out_root / f"hardness_{args.op}.csv"
    subprocess.run(
        [sys.executable, "-m", "rlaug.cli", "sweep-hardness",
         "--op", args.op, "--strengths", args.strengths, "--seeds", args.seeds,
         "--policy-dir", str(baseline_dir), "--out", str(csv_path)],
        check=True,
    )
    for line in csv_path.read_text().strip().split("\n"):
        if line.startswith("#"):
            print(line)
    print(f"full table: {csv_path}")


if __name__ == "__main__":
    main()
