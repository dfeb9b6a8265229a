#!/usr/bin/env python3
"""Regenerate the shared resampler test vectors consumed by the bindings suite.

Writes input/output ARLT pairs plus a manifest. Run from the repo root after
any intentional change to the resampling convention.
"""

import sys
from pathlib import Path

import numpy as np
import yaml

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rlaug.batch import ImageBatch, save_raw  # noqa: E402
from rlaug.transforms import bilinear_resize  # noqa: E402

OUT_DIR = Path(__file__).resolve().parent.parent / "bindings" / "tests" / "vectors"

CASES = [
    ("ramp_2x2_to_4x4_u8", np.uint8, (3, 2, 2), (4, 4)),
    ("rand_5x7_to_3x11_u8", np.uint8, (1, 5, 7), (3, 11)),
    ("rand_16x16_to_8x8_u8", np.uint8, (3, 16, 16), (8, 8)),
    ("pixel_1x1_to_3x3_u8", np.uint8, (1, 1, 1), (3, 3)),
    ("rand_9x4_to_9x4_u8", np.uint8, (3, 9, 4), (9, 4)),
    ("rand_16x16_to_8x8_f32", np.float32, (3, 16, 16), (8, 8)),
    ("rand_6x6_to_13x5_f32", np.float32, (1, 6, 6), (13, 5)),
]


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240817)
    manifest = []
    for name, dtype, (c, h, w), (oh, ow) in CASES:
        if dtype == np.uint8:
            data = rng.integers(0, 256, (1, c, h, w), dtype=np.uint8)
        else:
            data = rng.random((1, c, h, w)).astype(np.float32)
        batch = ImageBatch(data)
        out = bilinear_resize(batch, oh, ow)
        save_raw(batch, OUT_DIR / f"{name}_in.arlt")
        save_raw(out, OUT_DIR / f"{name}_out.arlt")
        manifest.append(
            {"name": name, "input": f"{name}_in.arlt", "output": f"{name}_out.arlt",
             "out_h": oh, "out_w": ow}
        )
    (OUT_DIR / "manifest.yaml").write_text(yaml.safe_dump(manifest, sort_keys=False))
    print(f"wrote {len(CASES)} vector pairs to {OUT_DIR}")


if __name__ == "__main__":
    main()
