"""Hardness ratio, interquartile mean, and diversity accounting.

Hardness of an augmentation, for a policy trained on clean frames, is the
ratio of its mean clean episode return to its mean augmented episode
return; above 1 means the augmentation degrades the policy. A zero
augmented mean is reported as a degenerate flag, never as a synthesized
number.

The interquartile mean (IQM) is the mean of the values lying between the
25th and 75th percentiles inclusive, percentiles taken with linear
interpolation between closest ranks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidValue
from .fusion import FusionSchedule
from .transforms import TRANSLATE_HD, TransformSpec, UNLIMITED


@dataclass(frozen=True)
class ReturnSample:
    """Episode returns plus the context they were collected in."""

    episode_returns: tuple[float, ...]
    context: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.episode_returns) == 0:
            raise InvalidValue("a return sample needs at least one episode")
        vals = tuple(float(v) for v in self.episode_returns)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidValue("episode returns must be finite")
        object.__setattr__(self, "episode_returns", vals)

    @property
    def mean(self) -> float:
        return float(np.mean(self.episode_returns))

    @property
    def n(self) -> int:
        return len(self.episode_returns)


@dataclass(frozen=True)
class HardnessReport:
    clean: ReturnSample
    augmented: ReturnSample
    ratio: float
    degenerate: bool = False

    @property
    def clean_mean(self) -> float:
        return self.clean.mean

    @property
    def aug_mean(self) -> float:
        return self.augmented.mean


def hardness(clean: ReturnSample, augmented: ReturnSample) -> HardnessReport:
    """Mean clean return over mean augmented return."""
    am = augmented.mean
    if am == 0.0:
        return HardnessReport(clean, augmented, math.inf, degenerate=True)
    return HardnessReport(clean, augmented, clean.mean / am)


def iqm(scores) -> float:
    """Interquartile mean: average of the middle half, bounds inclusive.

    Percentiles interpolate linearly between closest ranks. The inclusive
    band can only miss every sample for n = 2 distinct values; the plain
    mean is used there (the quarter-trimmed mean drops nothing at n = 2).
    """
    arr = np.sort(np.asarray(list(scores), dtype=np.float64))
    if arr.size == 0:
        raise InvalidValue("iqm of an empty list")
    lo = np.percentile(arr, 25.0, method="linear")
    hi = np.percentile(arr, 75.0, method="linear")
    middle = arr[(arr >= lo) & (arr <= hi)]
    if middle.size == 0:
        return float(arr.mean())
    return float(middle.mean())


def pearson_r(xs, ys) -> float | None:
    """Correlation coefficient; None when either side has zero variance."""
    x = np.asarray(list(xs), dtype=np.float64)
    y = np.asarray(list(ys), dtype=np.float64)
    if x.size != y.size or x.size < 2:
        raise InvalidValue("pearson_r needs two equal-length samples of size >= 2")
    xd = x - x.mean()
    yd = y - y.mean()
    denom = math.sqrt(float((xd * xd).sum()) * float((yd * yd).sum()))
    if denom == 0.0:
        return None
    return float((xd * yd).sum() / denom)


@dataclass(frozen=True)
class StrengthHardnessCurve:
    points: tuple[tuple[int, HardnessReport], ...]
    pearson: float | None
    degenerate_variance: bool

    @property
    def ratios(self) -> list[float]:
        return [rep.ratio for _, rep in self.points]


def default_strength_spec(kind: str, strength: int) -> TransformSpec:
    if kind == TRANSLATE_HD:
        return TransformSpec(kind, strength, strength, spatial_diversity=8)
    return TransformSpec(kind, strength, strength)


def strength_hardness_curve(evaluator, kind: str, strengths, make_spec=default_strength_spec) -> StrengthHardnessCurve:
    """Hardness per strength against one shared clean baseline.

    ``evaluator(spec_or_none)`` must return a :class:`ReturnSample`;
    ``None`` asks for the clean evaluation. Degenerate (zero-denominator)
    points are kept in the curve but excluded from the correlation.
    """
    strengths = list(strengths)
    if len(strengths) < 3:
        raise InvalidValue(f"need at least 3 strengths, got {len(strengths)}")
    clean = evaluator(None)
    points = []
    for s in strengths:
        aug = evaluator(make_spec(kind, s))
        points.append((s, hardness(clean, aug)))
    usable = [(s, rep.ratio) for s, rep in points if not rep.degenerate]
    r = None
    if len(usable) >= 2:
        r = pearson_r([s for s, _ in usable], [v for _, v in usable])
    return StrengthHardnessCurve(tuple(points), r, degenerate_variance=r is None)


def diversity_report(spec) -> dict:
    """Strength, spatial, and type diversity of an op or a fusion schedule."""
    if isinstance(spec, FusionSchedule):
        return {
            "type_diversity": len(spec.ops),
            "ops": [diversity_report(op) for op in spec.ops],
        }
    if not isinstance(spec, TransformSpec):
        raise InvalidValue(f"cannot report diversity of {type(spec).__name__}")
    return {
        "strength_diversity": spec.strength_max - spec.strength_min + 1,
        "spatial_diversity": spec.spatial_diversity,
        "type_diversity": 1,
    }


HARDNESS_CSV_HEADER = "strength,hardness_ratio,clean_mean,aug_mean,n_episodes,seed"


def format_hardness_csv(rows, pooled_pearson) -> str:
    """CSV text: one row per (strength, report, seed), pooled correlation as a comment."""
    lines = [HARDNESS_CSV_HEADER]
    for strength, rep, seed in rows:
        ratio = "inf" if rep.degenerate else repr(rep.ratio)
        lines.append(
            f"{strength},{ratio},{rep.clean_mean!r},{rep.aug_mean!r},{rep.augmented.n},{seed}"
        )
    tail = "nan" if pooled_pearson is None else repr(pooled_pearson)
    lines.append(f"# pearson_r={tail}")
    return "\n".join(lines) + "\n"
