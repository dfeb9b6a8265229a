"""Deterministic random streams built on the Philox4x64-10 counter-based generator.

Every random decision in this package flows through :class:`Rng`. The
generator is Philox4x64-10 (Salmon et al., SC'11), chosen because it is
stateless, splittable, and exactly reproducible from integer arithmetic
alone, so independent implementations in any language can match it
bit-for-bit.

Addressing scheme
-----------------
The 128-bit Philox key holds ``(seed, stream)``. The 256-bit counter is
used as four independent 64-bit lanes::

    word0  block index   (advances as draws are consumed)
    word1  image lane    (per-image independence inside a batch)
    word2  slot lane     (per-operator independence inside a schedule)
    word3  epoch lane    (per-update independence inside a training run)

Two ``Rng`` handles with any differing lane produce unrelated sequences;
equal (seed, stream, lanes) always replay the identical sequence. Batch-level
decisions use the reserved lane value ``BATCH_LANE``.

Derived scalars are pinned too: unit doubles take the top 53 bits
(``(x >> 11) * 2**-53``), bounded integers use the multiply-high reduction
``(x * n) >> 64``, and normals use Box-Muller on draw pairs.
"""

from __future__ import annotations

import math

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_U64 = (1 << 64) - 1

BATCH_LANE = _U64


def _mulhilo(a: np.uint64, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full 64x64 -> 128 bit product via 32-bit limbs; returns (hi, lo)."""
    a_lo = a & _MASK32
    a_hi = a >> _SHIFT32
    b_lo = b & _MASK32
    b_hi = b >> _SHIFT32
    ll = a_lo * b_lo
    lh = a_lo * b_hi
    hl = a_hi * b_lo
    cross = (ll >> _SHIFT32) + (lh & _MASK32) + (hl & _MASK32)
    hi = a_hi * b_hi + (lh >> _SHIFT32) + (hl >> _SHIFT32) + (cross >> _SHIFT32)
    lo = (cross << _SHIFT32) | (ll & _MASK32)
    return hi, lo


def philox_blocks(
    block: np.ndarray,
    image: np.ndarray | int,
    slot: np.ndarray | int,
    epoch: np.ndarray | int,
    seed: int,
    stream: int,
) -> np.ndarray:
    """Run Philox4x64-10 on counters (block, image, slot, epoch) with key (seed, stream).

    All counter arguments broadcast against ``block``. Returns an array of
    shape ``block.shape + (4,)`` of uint64 outputs.
    """
    block = np.asarray(block, dtype=np.uint64)
    c0 = block.copy()
    c1 = np.full(block.shape, image, dtype=np.uint64)
    c2 = np.full(block.shape, slot, dtype=np.uint64)
    c3 = np.full(block.shape, epoch, dtype=np.uint64)
    w0, w1 = int(_W0), int(_W1)
    for r in range(10):
        k0 = np.uint64((seed + r * w0) & _U64)
        k1 = np.uint64((stream + r * w1) & _U64)
        hi0, lo0 = _mulhilo(_M0, c0)
        hi1, lo1 = _mulhilo(_M1, c2)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack([c0, c1, c2, c3], axis=-1)


def _to_unit(x: np.ndarray) -> np.ndarray:
    """uint64 -> float64 in [0, 1) using the top 53 bits."""
    return (x >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def _bounded(x: np.ndarray, n: int) -> np.ndarray:
    """uint64 -> integer in [0, n) via the multiply-high reduction."""
    if n <= 0:
        raise ValueError("bound must be positive")
    hi, _ = _mulhilo(np.uint64(n), np.asarray(x, dtype=np.uint64))
    return hi.astype(np.int64)


class Rng:
    """One addressable random stream with a consuming cursor.

    Instances are cheap; derive fresh ones per image / slot / epoch rather
    than sharing a cursor across logical consumers.
    """

    __slots__ = ("seed", "stream", "image", "slot", "epoch", "_pos")

    def __init__(self, seed: int, stream: int = 0, *, image: int = 0, slot: int = 0, epoch: int = 0):
        self.seed = seed & _U64
        self.stream = stream & _U64
        self.image = image & _U64
        self.slot = slot & _U64
        self.epoch = epoch & _U64
        self._pos = 0

    def for_image(self, i: int) -> "Rng":
        return Rng(self.seed, self.stream, image=i, slot=self.slot, epoch=self.epoch)

    def for_slot(self, j: int) -> "Rng":
        return Rng(self.seed, self.stream, image=self.image, slot=j, epoch=self.epoch)

    def at_epoch(self, t: int) -> "Rng":
        return Rng(self.seed, self.stream, image=self.image, slot=self.slot, epoch=t)

    def clone(self) -> "Rng":
        r = Rng(self.seed, self.stream, image=self.image, slot=self.slot, epoch=self.epoch)
        r._pos = self._pos
        return r

    # -- raw draws ---------------------------------------------------------

    def u64(self, n: int | None = None):
        """Next ``n`` raw 64-bit draws (scalar int when n is None)."""
        count = 1 if n is None else int(n)
        start = self._pos
        self._pos += count
        first_block = start >> 2
        last_block = (start + count - 1) >> 2
        blocks = np.arange(first_block, last_block + 1, dtype=np.uint64)
        out = philox_blocks(blocks, self.image, self.slot, self.epoch, self.seed, self.stream)
        flat = out.reshape(-1)
        lo = start - first_block * 4
        vals = flat[lo:lo + count]
        if n is None:
            return int(vals[0])
        return vals

    # -- derived draws -----------------------------------------------------

    def unit(self, n: int | None = None):
        """Float64 in [0, 1)."""
        vals = _to_unit(self.u64(1 if n is None else n))
        return float(vals[0]) if n is None else vals

    def uniform(self, lo: float, hi: float, n: int | None = None):
        u = self.unit(n)
        return lo + (hi - lo) * u

    def below(self, bound: int, n: int | None = None):
        """Integer in [0, bound)."""
        vals = _bounded(self.u64(1 if n is None else n), bound)
        return int(vals[0]) if n is None else vals

    def randint(self, lo: int, hi: int, n: int | None = None):
        """Integer in [lo, hi] inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        vals = self.below(span, n)
        return lo + vals

    def normal(self, n: int | None = None):
        """Standard normals via Box-Muller; each value consumes two draws."""
        count = 1 if n is None else int(n)
        raw = self.u64(2 * count).reshape(count, 2)
        u1 = (raw[:, 0] >> np.uint64(11)).astype(np.float64)
        u1 = (u1 + 1.0) * (2.0**-53)  # (0, 1]
        u2 = _to_unit(raw[:, 1])
        z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * math.pi * u2)
        return float(z[0]) if n is None else z

    def shuffled(self, items: list) -> list:
        """Fisher-Yates shuffle (returns a new list)."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out


def image_draws(rng: Rng, image_lanes, k: int) -> np.ndarray:
    """Draws for a whole batch in one generator call.

    ``image_lanes`` is an image-lane index per batch entry (or a count, which
    stands for ``0..count-1``). Returns a ``(len(lanes), k)`` uint64 array
    whose row ``i`` equals the first ``k`` draws of
    ``rng.for_image(lanes[i])``; used by the batch kernels to avoid per-image
    generator overhead.
    """
    if isinstance(image_lanes, int):
        image_lanes = np.arange(image_lanes, dtype=np.uint64)
    lanes = np.asarray(image_lanes, dtype=np.uint64)
    n = lanes.shape[0]
    blocks_per = (k + 3) >> 2
    blocks = np.tile(np.arange(blocks_per, dtype=np.uint64), n)
    images = np.repeat(lanes, blocks_per)
    out = philox_blocks(blocks, images, rng.slot, rng.epoch, rng.seed, rng.stream)
    return out.reshape(n, blocks_per * 4)[:, :k]


def unit_from_u64(x: np.ndarray) -> np.ndarray:
    return _to_unit(np.asarray(x, dtype=np.uint64))


def bounded_from_u64(x: np.ndarray, bound: int) -> np.ndarray:
    return _bounded(x, bound)


class DrawBuffer:
    """Chunked front-end over one stream; same value sequence, fewer kernel calls.

    Useful in hot loops that consume a few draws at a time (exploration
    noise). Refill boundaries never change the sequence because the
    underlying draws are a pure function of the consumed count.
    """

    def __init__(self, rng: Rng, chunk: int = 4096):
        self._rng = rng
        self._chunk = chunk
        self._buf = np.empty(0, dtype=np.uint64)
        self._pos = 0

    def u64(self, k: int) -> np.ndarray:
        avail = len(self._buf) - self._pos
        if avail < k:
            fresh = self._rng.u64(max(self._chunk, k))
            self._buf = np.concatenate([self._buf[self._pos:], fresh])
            self._pos = 0
        out = self._buf[self._pos:self._pos + k]
        self._pos += k
        return out

    def uniform(self, lo: float, hi: float, n: int) -> np.ndarray:
        return lo + (hi - lo) * _to_unit(self.u64(n))

    def normal(self, n: int) -> np.ndarray:
        raw = self.u64(2 * n).reshape(n, 2)
        u1 = ((raw[:, 0] >> np.uint64(11)).astype(np.float64) + 1.0) * (2.0**-53)
        u2 = _to_unit(raw[:, 1])
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * math.pi * u2)
