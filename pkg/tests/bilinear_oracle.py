"""Brute-force scalar twin of the production resampler.

Same convention (half-pixel centers, edge clamp, float64 4-tap in a fixed
order) written as plain loops with no shared code, so kernel bugs cannot
hide in both sides at once.
"""

import math

import numpy as np


def oracle_resize_f64(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """(c, h, w) float64 -> (c, out_h, out_w) float64, scalar loops."""
    c, ih, iw = img.shape
    out = np.empty((c, out_h, out_w), dtype=np.float64)
    y_scale = ih / out_h
    x_scale = iw / out_w
    for y in range(out_h):
        sy = (y + 0.5) * y_scale - 0.5
        if sy < 0.0:
            sy = 0.0
        if sy > ih - 1:
            sy = float(ih - 1)
        y0 = math.floor(sy)
        y1 = min(y0 + 1, ih - 1)
        wy1 = sy - y0
        wy0 = 1.0 - wy1
        for x in range(out_w):
            sx = (x + 0.5) * x_scale - 0.5
            if sx < 0.0:
                sx = 0.0
            if sx > iw - 1:
                sx = float(iw - 1)
            x0 = math.floor(sx)
            x1 = min(x0 + 1, iw - 1)
            wx1 = sx - x0
            wx0 = 1.0 - wx1
            for ch in range(c):
                out[ch, y, x] = (
                    img[ch, y0, x0] * (wy0 * wx0)
                    + img[ch, y0, x1] * (wy0 * wx1)
                    + img[ch, y1, x0] * (wy1 * wx0)
                    + img[ch, y1, x1] * (wy1 * wx1)
                )
    return out


def oracle_resize_u8(img_u8: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """(c, h, w) uint8 -> uint8 via the pinned u8 -> f32 -> f64 -> f32 pipeline."""
    as_f64 = (img_u8.astype(np.float32) / np.float32(255.0)).astype(np.float64)
    res = oracle_resize_f64(as_f64, out_h, out_w)
    f32 = np.clip(res, 0.0, 1.0).astype(np.float32)
    return np.clip(np.floor(f32.astype(np.float64) * 255.0 + 0.5), 0.0, 255.0).astype(np.uint8)


def oracle_resize_f32(img_f32: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    res = oracle_resize_f64(img_f32.astype(np.float64), out_h, out_w)
    return np.clip(res, 0.0, 1.0).astype(np.float32)
