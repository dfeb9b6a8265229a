"""Multi-type augmentation schemes behind one scheduling interface.

Four ways to fuse an ordered list of operators:

    compose  every op in sequence, fixed or per-batch shuffled order
    sample   one op per image, chosen uniformly
    mix      k augmented copies per image, convexly combined with
             Dirichlet(alpha) weights
    cycle    one op for the whole batch; the active op advances every
             ``interval`` scheduler steps

The step counter only moves through :func:`tick`; ``apply`` never touches
it, so augmentation stays a pure function of (batch, schedule state, rng).

Slot-lane convention: op ``j`` draws its own parameters at slot ``j``;
scheme-level decisions (shuffle order, per-image op choice, mix weights)
draw at the reserved batch lane slot. Mix copy ``m`` of op ``j`` applies at
slot ``m * len(ops) + j``, so copy 0 reproduces the plain op bytewise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .batch import ImageBatch
from .errors import CounterOverflow, InvalidSchedule, InvalidValue
from .rng import BATCH_LANE, Rng
from .transforms import (
    PAD_CROP,
    RAND_PAD_RESIZE,
    TransformSpec,
    _from_f64,
    _to_f64,
    apply_transform,
)

COMPOSE = "compose"
SAMPLE = "sample"
MIX = "mix"
CYCLE = "cycle"
SCHEMES = (COMPOSE, SAMPLE, MIX, CYCLE)

_MAX_COUNTER = 2**63 - 1


@dataclass
class FusionSchedule:
    scheme: str
    ops: tuple[TransformSpec, ...]
    order_mode: str = "fixed"  # compose only: fixed | shuffled
    mix_width: int = 2  # mix only
    dirichlet_alpha: float = 1.0  # mix only
    interval: int = 100_000  # cycle only
    step_counter: int = 0

    def __post_init__(self):
        self.ops = tuple(self.ops)
        if self.scheme not in SCHEMES:
            raise InvalidSchedule(f"unknown scheme {self.scheme!r}")
        if not self.ops:
            raise InvalidSchedule("schedule needs at least one op")
        if self.order_mode not in ("fixed", "shuffled"):
            raise InvalidSchedule(f"order_mode must be fixed|shuffled, got {self.order_mode!r}")
        if self.mix_width < 1:
            raise InvalidSchedule(f"mix_width must be >= 1, got {self.mix_width}")
        if not (self.dirichlet_alpha > 0):
            raise InvalidSchedule(f"dirichlet_alpha must be > 0, got {self.dirichlet_alpha}")
        if self.interval < 1:
            raise InvalidSchedule(f"interval must be >= 1, got {self.interval}")
        if self.step_counter < 0:
            raise InvalidSchedule("step_counter must be >= 0")

    @property
    def active_index(self) -> int:
        return (self.step_counter // self.interval) % len(self.ops)

    def tick(self, n_steps: int = 1) -> "FusionSchedule":
        if n_steps < 1:
            raise InvalidValue(f"n_steps must be >= 1, got {n_steps}")
        if self.step_counter > _MAX_COUNTER - n_steps:
            raise CounterOverflow(f"step counter would pass {_MAX_COUNTER}")
        self.step_counter += n_steps
        return self

    def apply(self, batch: ImageBatch, rng: Rng) -> ImageBatch:
        return apply_schedule(self, batch, rng)


def tick(schedule: FusionSchedule, n_steps: int = 1) -> FusionSchedule:
    return schedule.tick(n_steps)


def default_cycaug(interval: int = 100_000) -> FusionSchedule:
    """Cycle over pad-crop(4) and random pad-resize [0, 16]."""
    return FusionSchedule(
        scheme=CYCLE,
        ops=(
            TransformSpec(PAD_CROP, 4, 4),
            TransformSpec(RAND_PAD_RESIZE, 0, 16),
        ),
        interval=interval,
    )


def _sched_rng(rng: Rng) -> Rng:
    return rng.for_slot(BATCH_LANE)


def _gamma_draw(d: Rng, alpha: float) -> float:
    """Marsaglia-Tsang gamma variate; draw count varies with rejections."""
    if alpha < 1.0:
        boost = (1.0 - d.unit()) ** (1.0 / alpha)
        return _gamma_draw(d, alpha + 1.0) * boost
    dd = alpha - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * dd)
    while True:
        x = d.normal()
        v = (1.0 + c * x) ** 3
        if v <= 0.0:
            continue
        u = d.unit()
        if u < 1.0 - 0.0331 * x**4:
            return dd * v
        if u > 0.0 and math.log(u) < 0.5 * x * x + dd * (1.0 - v + math.log(v)):
            return dd * v


def apply_schedule(schedule: FusionSchedule, batch: ImageBatch, rng: Rng) -> ImageBatch:
    """Augment a batch under the schedule's current state."""
    ops = schedule.ops
    if schedule.scheme == CYCLE:
        j = schedule.active_index
        return apply_transform(batch, ops[j], rng.for_slot(j))

    if schedule.scheme == COMPOSE:
        order = list(range(len(ops)))
        if schedule.order_mode == "shuffled":
            order = _sched_rng(rng).for_image(BATCH_LANE).shuffled(order)
        out = batch
        for j in order:
            out = apply_transform(out, ops[j], rng.for_slot(j))
        return out

    if schedule.scheme == SAMPLE:
        n = batch.n
        sched = _sched_rng(rng)
        choices = np.array([sched.for_image(i).below(len(ops)) for i in range(n)])
        out = np.empty_like(batch.data)
        for j in range(len(ops)):
            lanes = np.nonzero(choices == j)[0]
            if lanes.size == 0:
                continue
            sub = ImageBatch(batch.data[lanes])
            aug = apply_transform(sub, ops[j], rng.for_slot(j), image_lanes=lanes)
            out[lanes] = aug.data
        return ImageBatch(out)

    # mix
    n = batch.n
    k = schedule.mix_width
    sched = _sched_rng(rng)
    mixed = np.empty(batch.shape, dtype=np.float64)
    for i in range(n):
        d = sched.for_image(i)
        choices = [d.below(len(ops)) for _ in range(k)]
        gammas = np.array([_gamma_draw(d, schedule.dirichlet_alpha) for _ in range(k)])
        total = gammas.sum()
        weights = gammas / total if total > 0 else np.full(k, 1.0 / k)
        single = ImageBatch(batch.data[i:i + 1])
        acc = np.zeros(batch.shape[1:], dtype=np.float64)
        for m, j in enumerate(choices):
            copy = apply_transform(single, ops[j], rng.for_slot(m * len(ops) + j), image_lanes=[i])
            acc += weights[m] * _to_f64(copy.data)[0]
        mixed[i] = acc
    return ImageBatch(_from_f64(mixed, batch.data.dtype))
