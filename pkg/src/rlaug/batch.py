"""Image batches and their on-disk formats.

A batch is a dense ``(n, c, h, w)`` array, row-major, either ``uint8`` in
[0, 255] or ``float32`` in [0, 1]. Batches are frozen after construction;
every operation in this package returns a new batch.

ARLT raw format (little-endian, 32-byte header):

    bytes 0-3   magic b"ARLT"
    u32         version (1)
    u32 x4      n, c, h, w
    u8          dtype code (0 = uint8, 1 = float32)
    7 bytes     reserved, zero
    payload     row-major pixel data
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidShape, InvalidValue

MAGIC = b"ARLT"
VERSION = 1
_HEADER = struct.Struct("<4sIIIIIB7x")
_DTYPE_CODES = {np.dtype(np.uint8): 0, np.dtype(np.float32): 1}
_CODE_DTYPES = {0: np.dtype(np.uint8), 1: np.dtype(np.float32)}


@dataclass(frozen=True)
class ImageBatch:
    """Frozen (n, c, h, w) pixel tensor."""

    data: np.ndarray

    def __post_init__(self):
        a = self.data
        if a.ndim != 4:
            raise InvalidShape(f"expected 4 dims (n,c,h,w), got shape {a.shape}")
        n, c, h, w = a.shape
        if min(n, c, h, w) < 1:
            raise InvalidShape(f"all dims must be >= 1, got {a.shape}")
        if c not in (1, 3):
            raise InvalidShape(f"channels must be 1 or 3, got {c}")
        if a.dtype not in (np.uint8, np.float32):
            raise InvalidValue(f"dtype must be uint8 or float32, got {a.dtype}")
        if a.dtype == np.float32 and a.size and (a.min() < 0.0 or a.max() > 1.0):
            raise InvalidValue("float32 batches must lie in [0, 1]")
        if not a.flags.c_contiguous:
            a = np.ascontiguousarray(a)
            object.__setattr__(self, "data", a)
        a.flags.writeable = False

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def c(self) -> int:
        return self.data.shape[1]

    @property
    def h(self) -> int:
        return self.data.shape[2]

    @property
    def w(self) -> int:
        return self.data.shape[3]

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return self.data.shape

    def is_float(self) -> bool:
        return self.data.dtype == np.float32

    def to_float32(self) -> "ImageBatch":
        """uint8 -> float32 in [0, 1]; float batches pass through."""
        if self.is_float():
            return self
        return ImageBatch(self.data.astype(np.float32) / np.float32(255.0))

    def to_uint8(self) -> "ImageBatch":
        """float32 -> uint8 with round-half-up; uint8 batches pass through."""
        if not self.is_float():
            return self
        return ImageBatch(float_to_u8(self.data))


def float_to_u8(a: np.ndarray) -> np.ndarray:
    """Round-half-up conversion from [0, 1] floats to uint8.

    Pinned as floor(float64(v) * 255 + 0.5), clamped; written as in-place
    passes on one float64 scratch array.
    """
    x = np.multiply(a, 255.0, dtype=np.float64)
    x += 0.5
    np.floor(x, out=x)
    np.minimum(x, 255.0, out=x)
    np.maximum(x, 0.0, out=x)
    return x.astype(np.uint8)


def new_batch(n: int, c: int, h: int, w: int, dtype, fill) -> ImageBatch:
    """Constant-filled batch; validates dims and that fill is in dtype range."""
    dt = np.dtype(dtype)
    if dt not in _DTYPE_CODES:
        raise InvalidValue(f"unsupported dtype {dtype}")
    if min(n, c, h, w) < 1:
        raise InvalidShape(f"all dims must be >= 1, got {(n, c, h, w)}")
    if dt == np.uint8:
        if not (0 <= fill <= 255 and float(fill).is_integer()):
            raise InvalidValue(f"uint8 fill must be an integer in [0, 255], got {fill}")
    else:
        if not (0.0 <= fill <= 1.0):
            raise InvalidValue(f"float32 fill must lie in [0, 1], got {fill}")
    return ImageBatch(np.full((n, c, h, w), fill, dtype=dt))


def split_panorama(batch: ImageBatch) -> ImageBatch:
    """Split each w = k*h panorama into k square h x h tiles, left to right."""
    n, c, h, w = batch.shape
    if w % h != 0:
        raise InvalidShape(f"width {w} is not a multiple of height {h}")
    k = w // h
    tiles = batch.data.reshape(n, c, h, k, h).transpose(0, 3, 1, 2, 4).reshape(n * k, c, h, h)
    return ImageBatch(np.ascontiguousarray(tiles))


def join_panorama(batch: ImageBatch, k: int) -> ImageBatch:
    """Inverse of :func:`split_panorama`: stitch k consecutive tiles along width."""
    n, c, h, w = batch.shape
    if n % k != 0:
        raise InvalidShape(f"batch of {n} images cannot be grouped into panoramas of {k}")
    pano = batch.data.reshape(n // k, k, c, h, w).transpose(0, 2, 3, 1, 4).reshape(n // k, c, h, k * w)
    return ImageBatch(np.ascontiguousarray(pano))


def save_raw(batch: ImageBatch, path) -> None:
    n, c, h, w = batch.shape
    code = _DTYPE_CODES[batch.data.dtype]
    header = _HEADER.pack(MAGIC, VERSION, n, c, h, w, code)
    Path(path).write_bytes(header + batch.data.tobytes())


def load_raw(path) -> ImageBatch:
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise FormatError(f"{path}: truncated header ({len(blob)} bytes)")
    magic, version, n, c, h, w, code = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if code not in _CODE_DTYPES:
        raise FormatError(f"{path}: unknown dtype code {code}")
    dt = _CODE_DTYPES[code]
    expected = n * c * h * w * dt.itemsize
    payload = blob[_HEADER.size:]
    if len(payload) != expected:
        raise FormatError(f"{path}: payload is {len(payload)} bytes, expected {expected}")
    arr = np.frombuffer(payload, dtype=dt.newbyteorder("<")).astype(dt).reshape(n, c, h, w)
    return ImageBatch(arr)


def save_png(batch: ImageBatch, path) -> None:
    """Write a single-image uint8 batch as an 8-bit gray or RGB PNG."""
    from PIL import Image

    if batch.n != 1:
        raise FormatError(f"PNG export holds exactly one image, batch has {batch.n}")
    u8 = batch.to_uint8()
    chw = u8.data[0]
    if batch.c == 1:
        img = Image.fromarray(chw[0], mode="L")
    else:
        img = Image.fromarray(np.ascontiguousarray(chw.transpose(1, 2, 0)), mode="RGB")
    img.save(path, format="PNG")


def load_png(path) -> ImageBatch:
    """Read an 8-bit gray or RGB PNG as a single-image uint8 batch."""
    from PIL import Image

    with Image.open(path) as img:
        if img.format != "PNG":
            raise FormatError(f"{path}: not a PNG file")
        if img.mode == "L":
            arr = np.asarray(img, dtype=np.uint8)[None, None, :, :]
        elif img.mode == "RGB":
            arr = np.asarray(img, dtype=np.uint8).transpose(2, 0, 1)[None, :, :, :]
        else:
            raise FormatError(f"{path}: unsupported PNG mode {img.mode!r} (need 8-bit L or RGB)")
    return ImageBatch(np.ascontiguousarray(arr))
