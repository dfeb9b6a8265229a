import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rlaug.errors import InvalidValue
from rlaug.fusion import CYCLE, FusionSchedule
from rlaug.metrics import (
    HardnessReport,
    ReturnSample,
    StrengthHardnessCurve,
    diversity_report,
    format_hardness_csv,
    hardness,
    iqm,
    pearson_r,
    strength_hardness_curve,
)
from rlaug import transforms as tr
from rlaug.transforms import TransformSpec, UNLIMITED


def rs(*vals):
    return ReturnSample(tuple(vals))


def test_hardness_identical_samples_is_one():
    s = rs(10.0, 20.0, 30.0)
    rep = hardness(s, s)
    assert rep.ratio == 1.0
    assert not rep.degenerate


def test_hardness_forced_arithmetic():
    rep = hardness(rs(200.0, 200.0), rs(100.0, 100.0))
    assert rep.ratio == 2.0


def test_hardness_zero_denominator_flagged():
    rep = hardness(rs(5.0), rs(1.0, -1.0))
    assert rep.degenerate
    assert math.isinf(rep.ratio)


def test_hardness_scale_covariant():
    clean = rs(3.0, 5.0, 9.0)
    aug = rs(2.0, 4.0)
    base = hardness(clean, aug).ratio
    for lam in (0.125, 3.0, 1e6):
        scaled = hardness(
            rs(*(v * lam for v in clean.episode_returns)),
            rs(*(v * lam for v in aug.episode_returns)),
        ).ratio
        assert abs(scaled - base) < 1e-12


def test_return_sample_rejects_empty_and_nonfinite():
    with pytest.raises(InvalidValue):
        ReturnSample(())
    with pytest.raises(InvalidValue):
        ReturnSample((1.0, math.nan))


def test_iqm_constant_list():
    assert iqm([7.5] * 9) == 7.5


def test_iqm_one_to_eight():
    assert iqm([1, 2, 3, 4, 5, 6, 7, 8]) == 4.5


def test_iqm_outlier_outside_middle_half_ignored():
    base = [1, 2, 3, 4, 5, 6, 7, 8]
    spiked = [1, 2, 3, 4, 5, 6, 7, 800]
    assert iqm(base) == iqm(spiked)


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
@settings(max_examples=60, deadline=None)
def test_iqm_bounded_and_permutation_invariant(vals):
    v = iqm(vals)
    assert min(vals) - 1e-9 <= v <= max(vals) + 1e-9
    assert iqm(list(reversed(vals))) == v


def test_pearson_perfect_line():
    assert abs(pearson_r([0, 1, 2, 3], [5, 7, 9, 11]) - 1.0) < 1e-12
    assert abs(pearson_r([0, 1, 2, 3], [5, 3, 1, -1]) + 1.0) < 1e-12


def test_pearson_degenerate_variance_is_none():
    assert pearson_r([1, 1, 1], [2, 3, 4]) is None
    assert pearson_r([1, 2, 3], [4, 4, 4]) is None


@given(
    st.lists(st.tuples(st.floats(-100, 100), st.floats(-100, 100)), min_size=3, max_size=20),
    st.floats(0.1, 10),
    st.floats(-50, 50),
)
@settings(max_examples=40, deadline=None)
def test_pearson_affine_invariance(pairs, scale, shift):
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    r = pearson_r(xs, ys)
    if r is None:
        return
    assert -1.0 - 1e-9 <= r <= 1.0 + 1e-9
    r2 = pearson_r([x * scale + shift for x in xs], ys)
    if r2 is not None:
        assert abs(r - r2) < 1e-6


def test_curve_all_zero_strengths_flagged():
    calls = []

    def evaluator(spec):
        calls.append(spec)
        return rs(10.0, 10.0)

    curve = strength_hardness_curve(evaluator, tr.TRANSLATE_HD, [0, 0, 0])
    assert curve.ratios == [1.0, 1.0, 1.0]
    assert curve.pearson is None
    assert curve.degenerate_variance
    assert calls[0] is None  # shared clean baseline evaluated once
    assert len(calls) == 4


def test_curve_monotone_ratios_give_perfect_r():
    ratios = {0: 1.0, 2: 1.2, 4: 1.4, 8: 1.8, 12: 2.2}

    def evaluator(spec):
        if spec is None:
            return rs(100.0)
        return rs(100.0 / ratios[spec.strength_max])

    curve = strength_hardness_curve(evaluator, tr.TRANSLATE_HD, [0, 2, 4, 8, 12])
    assert curve.pearson is not None
    assert abs(curve.pearson - 1.0) < 1e-9


def test_curve_needs_three_strengths():
    with pytest.raises(InvalidValue):
        strength_hardness_curve(lambda s: rs(1.0), tr.TRANSLATE_HD, [0, 2])


def test_diversity_report_rand_pr():
    rep = diversity_report(TransformSpec(tr.RAND_PAD_RESIZE, 0, 16))
    assert rep == {"strength_diversity": 17, "spatial_diversity": UNLIMITED, "type_diversity": 1}


def test_diversity_report_translate_d8():
    rep = diversity_report(TransformSpec(tr.TRANSLATE_HD, 4, 4, spatial_diversity=8))
    assert rep["strength_diversity"] == 1
    assert rep["spatial_diversity"] == 8


def test_diversity_report_schedule():
    sched = FusionSchedule(
        CYCLE,
        (TransformSpec(tr.PAD_CROP, 4, 4), TransformSpec(tr.RAND_PAD_RESIZE, 0, 16)),
    )
    rep = diversity_report(sched)
    assert rep["type_diversity"] == 2
    assert len(rep["ops"]) == 2


def test_hardness_csv_format():
    rep = hardness(rs(10.0, 10.0), rs(5.0, 5.0))
    text = format_hardness_csv([(4, rep, 0)], 0.9)
    lines = text.strip().split("\n")
    assert lines[0] == "strength,hardness_ratio,clean_mean,aug_mean,n_episodes,seed"
    assert lines[1].startswith("4,2.0,10.0,5.0,2,0")
    assert lines[-1] == "# pearson_r=0.9"
