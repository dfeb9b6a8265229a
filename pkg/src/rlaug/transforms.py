"""Batch augmentation operators with pinned randomness and resampling.

Every operator maps an ``(n, c, h, w)`` batch to a batch of the same shape,
drawing its parameters per image from that image's own random lane, so the
result of augmenting a batch equals augmenting each image alone and
restacking. uint8 batches are converted to float32 in [0, 1], processed in
float64, and rounded back half-up, so the uint8 path is exactly the float
path plus rounding.

Resampling convention (shared by every resize-based operator): half-pixel
centers, ``src = (i + 0.5) * (in / out) - 0.5`` clamped to the valid range,
direct 4-tap bilinear evaluated in float64 as

    g00*w00 + g01*w01 + g10*w10 + g11*w11

with that exact association order. Tests hold a scalar brute-force twin of
this formula; both sides must agree bit-for-bit.

Per-image draw orders are part of the contract (an independent
implementation must consume draws in the same order):

    pad_crop          pad p in [min,max]; dy in [0,2p]; dx in [0,2p]
    rand_pad_resize   total s in [min,max]; composition index below C(s+3,3)
    pad_resize_hd     finite D: set index below D; unlimited: as rand_pad_resize
    crop_shift_hd     finite D: set index; unlimited: valid-split index, then
                      place-y in [0, v], place-x in [0, u]
    translate_hd      direction index below D
    rotate            unit magnitude draw; sign bit below 2
    cutout            side s in [min,max]; top in [0,h-s]; left in [0,w-s]

Compositions of a total into four non-negative parts are indexed
lexicographically as (top, bottom, left, right).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb, cos, sin, pi

import numpy as np

from .batch import ImageBatch, float_to_u8
from .errors import (
    DiversityTooLarge,
    InvalidStrength,
    InvalidValue,
    NotApplicable,
    NotPresampled,
)
from .rng import BATCH_LANE, Rng, image_draws

PAD_CROP = "pad_crop"
RAND_PAD_RESIZE = "rand_pad_resize"
PAD_RESIZE_HD = "pad_resize_hd"
CROP_SHIFT_HD = "crop_shift_hd"
TRANSLATE_HD = "translate_hd"
ROTATE = "rotate"
CUTOUT = "cutout"

KINDS = (PAD_CROP, RAND_PAD_RESIZE, PAD_RESIZE_HD, CROP_SHIFT_HD, TRANSLATE_HD, ROTATE, CUTOUT)
HD_KINDS = (PAD_RESIZE_HD, CROP_SHIFT_HD, TRANSLATE_HD)

UNLIMITED = "unlimited"

# compass directions in canonical order: (dy, dx) unit signs
DIRECTIONS = (
    ("up", (-1, 0)),
    ("down", (1, 0)),
    ("left", (0, -1)),
    ("right", (0, 1)),
    ("up_left", (-1, -1)),
    ("up_right", (-1, 1)),
    ("down_left", (1, -1)),
    ("down_right", (1, 1)),
)

# crop-shift canvases, translate vacancies, and rotation exteriors are
# always zero-filled; padding_mode only shapes the pad-based operators,
# which default to replicate so the padded frame keeps the image statistics
_DEFAULT_PADDING = {
    PAD_CROP: "replicate",
    RAND_PAD_RESIZE: "replicate",
    PAD_RESIZE_HD: "replicate",
}


@dataclass(frozen=True)
class TransformSpec:
    """One augmentation operator plus its strength and diversity controls.

    ``strength_min``/``strength_max`` are pixels (degrees for rotate).
    ``spatial_diversity`` is a positive count of pre-sampled parameter sets,
    or :data:`UNLIMITED` for fresh draws on every application. ``per_image``
    selects per-image parameter draws (default) versus one draw per batch.
    """

    kind: str
    strength_min: int
    strength_max: int
    spatial_diversity: int | str = UNLIMITED
    padding_mode: str | None = None
    param_sets: tuple | None = None
    per_image: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidValue(f"unknown transform kind {self.kind!r}")
        if not (0 <= self.strength_min <= self.strength_max):
            raise InvalidStrength(
                f"need 0 <= strength_min <= strength_max, got [{self.strength_min}, {self.strength_max}]"
            )
        if self.kind == ROTATE and self.strength_max > 180:
            raise InvalidStrength(f"rotation strength is degrees in [0, 180], got {self.strength_max}")
        d = self.spatial_diversity
        if d != UNLIMITED and (not isinstance(d, int) or d < 1):
            raise InvalidValue(f"spatial_diversity must be a positive integer or {UNLIMITED!r}, got {d!r}")
        if self.kind == TRANSLATE_HD and d != UNLIMITED and d > 8:
            raise DiversityTooLarge(f"translate has at most 8 directions, got D={d}")
        if self.padding_mode is None:
            object.__setattr__(self, "padding_mode", _DEFAULT_PADDING.get(self.kind, "zero"))
        if self.padding_mode not in ("replicate", "zero"):
            raise InvalidValue(f"padding_mode must be 'replicate' or 'zero', got {self.padding_mode!r}")

    @property
    def fixed_strength(self) -> int:
        if self.strength_min != self.strength_max:
            raise InvalidStrength(
                f"{self.kind} with pre-sampled diversity needs a fixed strength, "
                f"got range [{self.strength_min}, {self.strength_max}]"
            )
        return self.strength_max


# ---------------------------------------------------------------------------
# composition indexing


def n_compositions4(total: int) -> int:
    """Number of (top, bottom, left, right) splits of ``total``."""
    return comb(total + 3, 3)


def unrank_composition4(index: int, total: int) -> tuple[int, int, int, int]:
    """The ``index``-th split of ``total`` into four parts, lexicographic."""
    k = index
    a = 0
    while True:
        cnt = (total - a + 2) * (total - a + 1) // 2
        if k < cnt:
            break
        k -= cnt
        a += 1
    b = 0
    while True:
        cnt = total - a - b + 1
        if k < cnt:
            break
        k -= cnt
        b += 1
    c = k
    return a, b, c, total - a - b - c


def _crop_split_options(total: int, h: int, w: int) -> list[tuple[int, int]]:
    """(rows removed, cols removed) pairs that leave at least a 1x1 region."""
    lo = max(0, total - (w - 1))
    hi = min(h - 1, total)
    return [(v, total - v) for v in range(lo, hi + 1)]


def _n_valid_crop_quadruples(total: int, h: int, w: int) -> int:
    return sum((v + 1) * (u + 1) for v, u in _crop_split_options(total, h, w))


def _unrank_crop_quadruple(index: int, total: int, h: int, w: int) -> tuple[int, int, int, int]:
    k = index
    for v, u in _crop_split_options(total, h, w):
        cnt = (v + 1) * (u + 1)
        if k < cnt:
            t = k // (u + 1)
            l = k % (u + 1)
            return t, v - t, l, u - l
        k -= cnt
    raise IndexError(index)


# ---------------------------------------------------------------------------
# scalar draw decoding (same reductions as rng.Rng, on raw u64 rows)


class _Draws:
    __slots__ = ("row", "i")

    def __init__(self, row):
        self.row = row
        self.i = 0

    def _next(self) -> int:
        v = int(self.row[self.i])
        self.i += 1
        return v

    def below(self, bound: int) -> int:
        return (self._next() * bound) >> 64

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def unit(self) -> float:
        return (self._next() >> 11) * 2.0**-53


# ---------------------------------------------------------------------------
# dtype plumbing


def _to_f64(data: np.ndarray) -> np.ndarray:
    if data.dtype != np.uint8:
        return data.astype(np.float64)
    f32 = np.divide(data, np.float32(255.0), dtype=np.float32)
    return f32.astype(np.float64)


def _from_f64(arr: np.ndarray, dtype) -> np.ndarray:
    # uint8 results are defined as the float32 result rounded half-up, so the
    # two dtype paths can never drift apart; arr is kernel scratch, safe to
    # clamp in place
    np.minimum(arr, 1.0, out=arr)
    np.maximum(arr, 0.0, out=arr)
    f32 = arr.astype(np.float32)
    if dtype != np.uint8:
        return f32
    return float_to_u8(f32)


def _same_content(batch: ImageBatch) -> ImageBatch:
    return ImageBatch(batch.data)


# ---------------------------------------------------------------------------
# bilinear resampler (the one pinned interpolation kernel)

_axis_cache: dict[tuple[int, int], tuple] = {}
_plan_cache: dict[tuple[int, int, int, int], tuple] = {}


def _axis_weights(in_size: int, out_size: int):
    key = (in_size, out_size)
    hit = _axis_cache.get(key)
    if hit is not None:
        return hit
    scale = in_size / out_size
    s = np.clip((np.arange(out_size, dtype=np.float64) + 0.5) * scale - 0.5, 0.0, float(in_size - 1))
    i0 = np.floor(s).astype(np.int64)
    i1 = np.minimum(i0 + 1, in_size - 1)
    w1 = s - i0
    w0 = 1.0 - w1
    entry = (i0, i1, w0, w1)
    if len(_axis_cache) < 4096:
        _axis_cache[key] = entry
    return entry


def _resize_plan(ih: int, iw: int, oh: int, ow: int):
    """Flat gather indices and weight grids for one size pair, cached."""
    key = (ih, iw, oh, ow)
    hit = _plan_cache.get(key)
    if hit is not None:
        return hit
    y0, y1, wy0, wy1 = _axis_weights(ih, oh)
    x0, x1, wx0, wx1 = _axis_weights(iw, ow)
    i00 = y0[:, None] * iw + x0[None, :]
    i01 = y0[:, None] * iw + x1[None, :]
    i10 = y1[:, None] * iw + x0[None, :]
    i11 = y1[:, None] * iw + x1[None, :]
    w00 = wy0[:, None] * wx0[None, :]
    w01 = wy0[:, None] * wx1[None, :]
    w10 = wy1[:, None] * wx0[None, :]
    w11 = wy1[:, None] * wx1[None, :]
    entry = (i00, i01, i10, i11, w00, w01, w10, w11)
    if len(_plan_cache) < 2048:
        _plan_cache[key] = entry
    return entry


def _bilinear_chw(img: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Resize one (c, h, w) float64 image; edge-clamped half-pixel bilinear.

    Accumulation order is pinned to g00*w00 + g01*w01 + g10*w10 + g11*w11,
    matching the brute-force twin bit for bit.
    """
    ih, iw = img.shape[1], img.shape[2]
    i00, i01, i10, i11, w00, w01, w10, w11 = _resize_plan(ih, iw, out_h, out_w)
    flat = np.ascontiguousarray(img).reshape(img.shape[0], ih * iw)
    acc = np.take(flat, i00, axis=1)
    acc *= w00
    tmp = np.take(flat, i01, axis=1)
    tmp *= w01
    acc += tmp
    np.take(flat, i10, axis=1, out=tmp)
    tmp *= w10
    acc += tmp
    np.take(flat, i11, axis=1, out=tmp)
    tmp *= w11
    acc += tmp
    return acc


def bilinear_resize(image: ImageBatch, out_h: int, out_w: int) -> ImageBatch:
    """Resize a single-image batch to (out_h, out_w)."""
    if out_h < 1 or out_w < 1:
        raise InvalidValue(f"target size must be >= 1, got {(out_h, out_w)}")
    arr = _to_f64(image.data)
    out = np.stack([_bilinear_chw(arr[i], out_h, out_w) for i in range(image.n)])
    return ImageBatch(_from_f64(out, image.data.dtype))


def _pad_chw(img: np.ndarray, t: int, b: int, l: int, r: int, mode: str) -> np.ndarray:
    if mode == "replicate":
        return np.pad(img, ((0, 0), (t, b), (l, r)), mode="edge")
    c, h, w = img.shape
    canvas = np.zeros((c, h + t + b, w + l + r), dtype=img.dtype)
    canvas[:, t:t + h, l:l + w] = img
    return canvas


# ---------------------------------------------------------------------------
# per-image kernels (float64 in, float64 out)


def _kernel_pad_crop(img, d: _Draws, spec, h, w):
    p = d.randint(spec.strength_min, spec.strength_max)
    dy = d.randint(0, 2 * p)
    dx = d.randint(0, 2 * p)
    if p == 0:
        return img
    if spec.padding_mode == "replicate":
        yidx = np.clip(np.arange(h) + dy - p, 0, h - 1)
        xidx = np.clip(np.arange(w) + dx - p, 0, w - 1)
        return img[:, yidx, :][:, :, xidx]
    padded = _pad_chw(img, p, p, p, p, "zero")
    return padded[:, dy:dy + h, dx:dx + w]


def _resize_quadruple(img, quad, mode, h, w):
    t, b, l, r = quad
    if t == b == l == r == 0:
        return img
    return _bilinear_chw(_pad_chw(img, t, b, l, r, mode), h, w)


def _kernel_rand_pr(img, d: _Draws, spec, h, w):
    s = d.randint(spec.strength_min, spec.strength_max)
    quad = unrank_composition4(d.below(n_compositions4(s)), s)
    return _resize_quadruple(img, quad, spec.padding_mode, h, w)


def _kernel_pr_hd(img, d: _Draws, spec, h, w):
    if spec.spatial_diversity == UNLIMITED:
        return _kernel_rand_pr(img, d, spec, h, w)
    quad = spec.param_sets[d.below(spec.spatial_diversity)]
    return _resize_quadruple(img, quad, spec.padding_mode, h, w)


def _place_region(img, params, h, w):
    t, b, l, r, py, px = params
    if t + b >= h or l + r >= w:
        raise InvalidStrength(
            f"crop split {params[:4]} leaves no region on a {h}x{w} frame"
        )
    out = np.zeros_like(img)
    out[:, py:py + h - t - b, px:px + w - l - r] = img[:, t:h - b, l:w - r]
    return out


def _kernel_crop_shift(img, d: _Draws, spec, h, w):
    if spec.spatial_diversity == UNLIMITED:
        s = spec.fixed_strength
        total = _n_valid_crop_quadruples(s, h, w)
        if total == 0:
            raise InvalidStrength(f"strength {s} leaves no valid region on a {h}x{w} frame")
        t, b, l, r = _unrank_crop_quadruple(d.below(total), s, h, w)
        py = d.randint(0, t + b)
        px = d.randint(0, l + r)
        return _place_region(img, (t, b, l, r, py, px), h, w)
    return _place_region(img, spec.param_sets[d.below(spec.spatial_diversity)], h, w)


def _translate_offsets(direction: str, strength: int) -> tuple[int, int]:
    dy_sign, dx_sign = dict(DIRECTIONS)[direction]
    if dy_sign and dx_sign:
        dx = (strength + 1) // 2  # remainder goes to the horizontal axis
        dy = strength // 2
    elif dx_sign:
        dy, dx = 0, strength
    else:
        dy, dx = strength, 0
    return dy_sign * dy, dx_sign * dx


def _shift_chw(img, dy: int, dx: int):
    out = np.zeros_like(img)
    h, w = img.shape[1], img.shape[2]
    ys = slice(max(dy, 0), h + min(dy, 0))
    xs = slice(max(dx, 0), w + min(dx, 0))
    ys_src = slice(max(-dy, 0), h + min(-dy, 0))
    xs_src = slice(max(-dx, 0), w + min(-dx, 0))
    out[:, ys, xs] = img[:, ys_src, xs_src]
    return out


def _kernel_translate(img, d: _Draws, spec, h, w):
    dirs = spec.param_sets
    direction = dirs[d.below(len(dirs))]
    s = spec.fixed_strength
    if s == 0:
        return img
    dy, dx = _translate_offsets(direction, s)
    return _shift_chw(img, dy, dx)


def rotate_chw(img: np.ndarray, theta_deg: float) -> np.ndarray:
    """Rotate one (c, h, w) float64 image about its center; outside reads zero."""
    if theta_deg == 0.0:
        return img
    h, w = img.shape[1], img.shape[2]
    theta = theta_deg * pi / 180.0
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    yy, xx = np.meshgrid(np.arange(h, dtype=np.float64) - cy, np.arange(w, dtype=np.float64) - cx, indexing="ij")
    ct, st = cos(theta), sin(theta)
    sy = cy + yy * ct - xx * st
    sx = cx + yy * st + xx * ct
    padded = np.pad(img, ((0, 0), (1, 1), (1, 1)), mode="constant")
    y0 = np.floor(sy)
    x0 = np.floor(sx)
    wy1 = sy - y0
    wx1 = sx - x0
    wy0 = 1.0 - wy1
    wx0 = 1.0 - wx1
    yi0 = np.clip(y0.astype(np.int64), -1, h) + 1
    xi0 = np.clip(x0.astype(np.int64), -1, w) + 1
    yi1 = np.clip(y0.astype(np.int64) + 1, -1, h) + 1
    xi1 = np.clip(x0.astype(np.int64) + 1, -1, w) + 1
    g00 = padded[:, yi0, xi0]
    g01 = padded[:, yi0, xi1]
    g10 = padded[:, yi1, xi0]
    g11 = padded[:, yi1, xi1]
    return g00 * (wy0 * wx0) + g01 * (wy0 * wx1) + g10 * (wy1 * wx0) + g11 * (wy1 * wx1)


def _kernel_rotate(img, d: _Draws, spec, h, w):
    mag = spec.strength_min + d.unit() * (spec.strength_max - spec.strength_min)
    sign = 1.0 if d.below(2) == 0 else -1.0
    return rotate_chw(img, sign * mag)


def _kernel_cutout(img, d: _Draws, spec, h, w):
    s = d.randint(spec.strength_min, spec.strength_max)
    y = d.randint(0, h - s)
    x = d.randint(0, w - s)
    if s == 0:
        return img
    out = img.copy()
    # dtype midpoint; 128 is exactly what round-half-up makes of 0.5
    out[:, y:y + s, x:x + s] = 128 if img.dtype == np.uint8 else 0.5
    return out


_KERNELS = {
    PAD_CROP: (_kernel_pad_crop, 3),
    RAND_PAD_RESIZE: (_kernel_rand_pr, 2),
    PAD_RESIZE_HD: (_kernel_pr_hd, 2),
    CROP_SHIFT_HD: (_kernel_crop_shift, 3),
    TRANSLATE_HD: (_kernel_translate, 1),
    ROTATE: (_kernel_rotate, 2),
    CUTOUT: (_kernel_cutout, 3),
}

# pure index/fill operators: identical results on raw uint8/float32 data, so
# they skip the float64 round trip (the conversion lemma in the module
# docstring makes both routes bit-equal)
_INDEX_KINDS = {PAD_CROP, CROP_SHIFT_HD, TRANSLATE_HD, CUTOUT}


# ---------------------------------------------------------------------------
# validation + dispatch


def _is_identity(spec: TransformSpec) -> bool:
    return spec.strength_max == 0


def _validate(spec: TransformSpec, h: int, w: int) -> TransformSpec:
    if spec.kind == PAD_CROP and spec.strength_max >= min(h, w):
        raise InvalidStrength(f"pad {spec.strength_max} must be < min(h, w) = {min(h, w)}")
    if spec.kind == CROP_SHIFT_HD:
        if spec.strength_max > h + w - 2:
            raise InvalidStrength(f"crop-shift strength {spec.strength_max} too large for {h}x{w} frames")
        if spec.spatial_diversity == UNLIMITED:
            spec.fixed_strength
    if spec.kind == TRANSLATE_HD:
        if spec.strength_max >= min(h, w):
            raise InvalidStrength(f"translate strength {spec.strength_max} must be < min(h, w) = {min(h, w)}")
        spec.fixed_strength
        if spec.param_sets is None:
            d = spec.spatial_diversity
            if d == UNLIMITED or d == 8:
                spec = replace(spec, spatial_diversity=8, param_sets=tuple(name for name, _ in DIRECTIONS))
            else:
                raise NotPresampled(f"translate with D={d} must be presampled first")
    if spec.kind == CUTOUT and spec.strength_max > min(h, w):
        raise InvalidStrength(f"cutout side {spec.strength_max} exceeds min(h, w) = {min(h, w)}")
    if spec.kind in (PAD_RESIZE_HD, CROP_SHIFT_HD) and spec.spatial_diversity != UNLIMITED:
        if spec.param_sets is None:
            raise NotPresampled(f"{spec.kind} with finite D must be presampled first")
    if spec.param_sets is not None and spec.spatial_diversity != UNLIMITED:
        if len(spec.param_sets) != spec.spatial_diversity:
            raise InvalidValue(
                f"param_sets holds {len(spec.param_sets)} entries but D={spec.spatial_diversity}"
            )
    return spec


def apply_raw(frames: np.ndarray, spec: TransformSpec, rng: Rng, image_lanes=None) -> np.ndarray:
    """Kernel core on a raw (n, c, h, w) array; no channel-count validation.

    Every kernel is channel-agnostic, so callers may stack extra planes into
    the channel axis to share one parameter draw across several images.
    """
    n, c, h, w = frames.shape
    spec = _validate(spec, h, w)
    if _is_identity(spec):
        return frames
    kernel, n_draws = _KERNELS[spec.kind]
    if spec.per_image:
        rows = image_draws(rng, n if image_lanes is None else image_lanes, n_draws)
    else:
        row = rng.for_image(BATCH_LANE).u64(n_draws)
        rows = np.broadcast_to(row, (n, n_draws))
    if spec.kind in _INDEX_KINDS:
        out = np.empty_like(frames)
        for i in range(n):
            out[i] = kernel(frames[i], _Draws(rows[i]), spec, h, w)
        return out
    src = _to_f64(frames)
    out = np.empty_like(src)
    for i in range(n):
        out[i] = kernel(src[i], _Draws(rows[i]), spec, h, w)
    return _from_f64(out, frames.dtype)


def apply_transform(
    batch: ImageBatch,
    spec: TransformSpec,
    rng: Rng,
    image_lanes=None,
) -> ImageBatch:
    """Apply one operator to a batch, drawing parameters per image.

    ``image_lanes`` overrides the per-image lane indices (default
    ``0..n-1``), so a sub-batch can be augmented exactly as it would have been
    inside its parent batch.
    """
    out = apply_raw(batch.data, spec, rng, image_lanes)
    if out is batch.data:
        return _same_content(batch)
    return ImageBatch(out)


# spec-style call signatures for the individual operators


def pad_crop(batch: ImageBatch, pad: int, rng: Rng, padding_mode: str = "replicate") -> ImageBatch:
    return apply_transform(batch, TransformSpec(PAD_CROP, pad, pad, padding_mode=padding_mode), rng)


def rand_pad_resize(
    batch: ImageBatch,
    strength_min: int,
    strength_max: int,
    rng: Rng,
    padding_mode: str | None = None,
) -> ImageBatch:
    spec = TransformSpec(RAND_PAD_RESIZE, strength_min, strength_max, padding_mode=padding_mode)
    return apply_transform(batch, spec, rng)


def pad_resize_hd(batch: ImageBatch, spec: TransformSpec, rng: Rng) -> ImageBatch:
    if spec.kind != PAD_RESIZE_HD:
        raise InvalidValue(f"expected a {PAD_RESIZE_HD} spec, got {spec.kind}")
    return apply_transform(batch, spec, rng)


def crop_shift_hd(batch: ImageBatch, spec: TransformSpec, rng: Rng) -> ImageBatch:
    if spec.kind != CROP_SHIFT_HD:
        raise InvalidValue(f"expected a {CROP_SHIFT_HD} spec, got {spec.kind}")
    return apply_transform(batch, spec, rng)


def translate_hd(batch: ImageBatch, spec: TransformSpec, rng: Rng) -> ImageBatch:
    if spec.kind != TRANSLATE_HD:
        raise InvalidValue(f"expected a {TRANSLATE_HD} spec, got {spec.kind}")
    return apply_transform(batch, spec, rng)


def rotate(batch: ImageBatch, max_degrees: float, rng: Rng) -> ImageBatch:
    return apply_transform(batch, TransformSpec(ROTATE, 0, int(max_degrees)), rng)


def cutout(batch: ImageBatch, strength: int, rng: Rng) -> ImageBatch:
    return apply_transform(batch, TransformSpec(CUTOUT, strength, strength), rng)


# ---------------------------------------------------------------------------
# pre-sampling of finite spatial diversity


def presample_param_sets(spec: TransformSpec, rng: Rng) -> TransformSpec:
    """Draw the spec's D parameter sets once; applications then select among them.

    Sets are drawn by rejection until D distinct tuples are collected, so the
    result is uniform over subsets given the stream. Raises
    :class:`DiversityTooLarge` when fewer than D distinct tuples exist.
    """
    d = spec.spatial_diversity
    if d == UNLIMITED:
        raise NotApplicable("unlimited diversity draws fresh parameters; nothing to presample")
    if spec.kind == TRANSLATE_HD:
        if d > 8:
            raise DiversityTooLarge(f"translate has at most 8 directions, got D={d}")
        chosen: list[str] = []
        while len(chosen) < d:
            name = DIRECTIONS[rng.below(8)][0]
            if name not in chosen:
                chosen.append(name)
        return replace(spec, param_sets=tuple(chosen))
    if spec.kind == PAD_RESIZE_HD:
        s = spec.fixed_strength
        total = n_compositions4(s)
        if d > total:
            raise DiversityTooLarge(f"only {total} pad splits of strength {s} exist, got D={d}")
        quads: list[tuple] = []
        while len(quads) < d:
            q = unrank_composition4(rng.below(total), s)
            if q not in quads:
                quads.append(q)
        return replace(spec, param_sets=tuple(quads))
    if spec.kind == CROP_SHIFT_HD:
        return _presample_crop_shift(spec, rng)
    raise NotApplicable(f"{spec.kind} has unlimited spatial diversity; nothing to presample")


_CROP_SHIFT_FRAME = 84  # pre-sampled placements assume the standard frame


def _presample_crop_shift(spec: TransformSpec, rng: Rng, h: int = _CROP_SHIFT_FRAME, w: int = _CROP_SHIFT_FRAME) -> TransformSpec:
    s = spec.fixed_strength
    d = spec.spatial_diversity
    n_quads = _n_valid_crop_quadruples(s, h, w)
    # each (v, u) split yields (v+1)(u+1) quadruples, each with (v+1)(u+1) placements
    total = sum(((v + 1) * (u + 1)) ** 2 for v, u in _crop_split_options(s, h, w))
    if n_quads == 0:
        raise InvalidStrength(f"strength {s} leaves no valid region on a {h}x{w} frame")
    if d > total:
        raise DiversityTooLarge(f"only {total} crop/shift tuples of strength {s} exist, got D={d}")
    sets: list[tuple] = []
    while len(sets) < d:
        t, b, l, r = _unrank_crop_quadruple(rng.below(n_quads), s, h, w)
        py = rng.randint(0, t + b)
        px = rng.randint(0, l + r)
        tup = (t, b, l, r, py, px)
        if tup not in sets:
            sets.append(tup)
    return replace(spec, param_sets=tuple(sets))
