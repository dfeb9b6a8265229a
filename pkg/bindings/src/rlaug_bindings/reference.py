"""Reference half-pixel bilinear resampler.

Deliberately plain: scalar loops, no caching, no vectorized gathers, and no
code shared with the engine. Convention: source coordinate
``(i + 0.5) * (in / out) - 0.5`` clamped to the valid range, four-tap
weights from the fractional parts, float64 arithmetic.
"""

from __future__ import annotations

import math

import numpy as np


def reference_bilinear(image: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """(c, h, w) array -> (c, out_h, out_w) float64 resample."""
    if image.ndim != 3:
        raise ValueError(f"expected (c, h, w), got shape {image.shape}")
    if out_h < 1 or out_w < 1:
        raise ValueError("output sizes must be positive")
    src = image.astype(np.float64)
    c, ih, iw = src.shape
    out = np.zeros((c, out_h, out_w), dtype=np.float64)
    for y in range(out_h):
        fy = (y + 0.5) * (ih / out_h) - 0.5
        fy = min(max(fy, 0.0), ih - 1.0)
        ylo = math.floor(fy)
        yhi = min(ylo + 1, ih - 1)
        ty = fy - ylo
        for x in range(out_w):
            fx = (x + 0.5) * (iw / out_w) - 0.5
            fx = min(max(fx, 0.0), iw - 1.0)
            xlo = math.floor(fx)
            xhi = min(xlo + 1, iw - 1)
            tx = fx - xlo
            for ch in range(c):
                top = src[ch, ylo, xlo] + tx * (src[ch, ylo, xhi] - src[ch, ylo, xlo])
                bottom = src[ch, yhi, xlo] + tx * (src[ch, yhi, xhi] - src[ch, yhi, xlo])
                out[ch, y, x] = top + ty * (bottom - top)
    return out


def reference_bilinear_u8(image_u8: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """uint8-in, uint8-out variant using the engine's value pipeline."""
    as_float = image_u8.astype(np.float32) / np.float32(255.0)
    res = reference_bilinear(as_float.astype(np.float64), out_h, out_w)
    res = np.minimum(np.maximum(res, 0.0), 1.0).astype(np.float32)
    return np.floor(res.astype(np.float64) * 255.0 + 0.5).clip(0, 255).astype(np.uint8)
