#!/usr/bin/env python3
"""Train the four augmentation arms on DotReacher and print the IQM table.

Drives the CLI end to end (train + compare); see README for the arms.
Roughly 25 minutes with --parallel-seeds 2 on two cores.
"""

import argparse
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

BASE = """\
seeds: [{seeds}]
total_env_steps: {steps}
warmup_steps: 1000
update_every: 4
batch_size: 32
replay_capacity: 10000
eval_every: 5000
eval_episodes: 10
lr: 0.001
actor_lr: 0.0003
stddev_end: 0.2
stddev_fraction: 1.0
augmentation: {aug}
"""

ARMS = {
    "none": "none",
    "pad_crop4": "{kind: pad_crop, strength: 4}",
    "rand_pr": "{kind: rand_pad_resize, strength: [0, 16]}",
    "cycaug": (
        "{scheme: cycle, interval: 500, ops: ["
        "{kind: pad_crop, strength: 4}, "
        "{kind: rand_pad_resize, strength: [0, 16]}]}"
    ),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="runs/da_benefit")
    ap.add_argument("--seeds", default="0,1,2,3,4")
    ap.add_argument("--steps", type=int, default=30_000)
    ap.add_argument("--parallel-seeds", type=int, default=2)
    args = ap.parse_args()

    out_root = Path(args.out)
    out_root.mkdir(parents=True, exist_ok=True)
    run_dirs = []
    for arm, aug in ARMS.items():
        cfg_path = out_root / f"{arm}.yaml"
        cfg_path.write_text(BASE.format(seeds=args.seeds, steps=args.steps, aug=aug))
        run_dir = out_root / arm
        run_dirs.append(str(run_dir))
        print(f"== training {arm} ==", flush=True)
        subprocess.run(
            [sys.executable, "-m", "rlaug.cli", "train", "--config", str(cfg_path),
             "--out", str(run_dir), "--parallel-seeds", str(args.parallel_seeds)],
            check=True,
        )
    subprocess.run(
        [sys.executable, "-m", "rlaug.cli", "compare", *run_dirs, "--out", str(out_root)],
        check=True,
    )


if __name__ == "__main__":
    main()
