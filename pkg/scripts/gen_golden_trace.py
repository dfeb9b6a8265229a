#!/usr/bin/env python3
"""Regenerate the committed environment golden trace (tests/golden/).

Run only after an intentional renderer or dynamics change, then commit the
new trace.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rlaug.batch import ImageBatch, save_raw  # noqa: E402
from rlaug.rng import Rng  # noqa: E402
from rlaug.toyrl import DotReacherConfig, DotReacherEnv  # noqa: E402


def main():
    out = Path(__file__).resolve().parent.parent / "tests" / "golden" / "dotreacher_trace.arlt"
    out.parent.mkdir(exist_ok=True)
    env = DotReacherEnv(DotReacherConfig(), seed=1234)
    frames = [env.reset().data[0]]
    rng = Rng(1234, 99)
    for _ in range(10):
        frame, _, done = env.step(rng.uniform(-1.0, 1.0, 2))
        frames.append(frame.data[0])
        if done:
            break
    save_raw(ImageBatch(np.stack(frames)), out)
    print(f"wrote {out} ({len(frames)} frames)")


if __name__ == "__main__":
    main()
