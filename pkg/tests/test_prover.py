import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhlcert.certifier import (IntervalBox, lemma2_ratio, lemma3_ratio, lipschitz_ratio,
                               prove_square, prove_sup_bound, ratio_upper, region_boxes)
from hhlcert.certifier.interval import Interval
from hhlcert.certifier.prover import box_point_check, enclose
from hhlcert.certifier.report import FAIL, INDETERMINATE, PASS, PROVED
from hhlcert.errors import ConfigurationError
from hhlcert.filters import KappaParams, filter_values

P2 = KappaParams(2.0)
PI2 = math.pi**2


def test_lemma2_case4_transition_box():
    rep = prove_sup_bound("lemma2", 4, P2, IntervalBox.of(0.25, 0.5, 0.25, 0.5), budget=10**5)
    assert rep.status == PASS and rep.rigor == PROVED
    assert rep.sup <= 0.5 * PI2 * (1 + 1e-6)


def test_lemma3_case5_at_t0_100():
    rep = prove_sup_bound("lemma3", 5, P2, IntervalBox.of(0.25, 0.5, 0.25, 0.5), t0=100.0,
                          budget=10**6)
    assert rep.status == PASS
    assert rep.sup <= PI2 * (1 + 1e-6)


def test_case_label_must_match_box():
    with pytest.raises(ConfigurationError):
        prove_sup_bound("lemma3", 1, P2, IntervalBox.of(0.25, 0.5, 0.25, 0.5))


def test_straddling_box_rejected():
    with pytest.raises(ConfigurationError):
        IntervalBox.of(0.4, 0.6, 0.1, 0.2).region_pair(P2)


def test_false_target_yields_counterexample():
    rep = prove_sup_bound("lemma3", 5, P2, IntervalBox.of(0.25, 0.5, 0.25, 0.5), target=5.0)
    assert rep.status == FAIL
    assert rep.sup > 5.0
    assert float(lemma3_ratio(P2, 1.0, rep.lambda1, rep.lambda2)) == pytest.approx(rep.sup)


def test_small_budget_is_indeterminate():
    # the tight target forces bisection near the (1/k, 1/k) corner
    rep = prove_sup_bound("lemma3", 2, P2, IntervalBox.of(0.5, 1, 0.25, 0.5), budget=3,
                          target=PI2 / 2 + 0.6)
    assert rep.status == INDETERMINATE and rep.sup == math.inf


def test_region_boxes_tile():
    boxes = region_boxes("lemma3", P2, 1e-3, 1.0)
    assert len(boxes) == 9
    area = sum(b.lam1.width * b.lam2.width for b in boxes)
    assert area == pytest.approx((1 - 1e-3) ** 2, rel=1e-12)
    assert len(region_boxes("lemma2", P2, 1e-3, 1.0)) == 6


def test_point_box():
    box = IntervalBox.of(0.3, 0.3, 0.26, 0.26)
    assert box_point_check("lemma3", P2, box, t0=100.0) == pytest.approx(9.8177621473027752,
                                                                         rel=1e-12)
    with pytest.raises(ValueError):
        box_point_check("lemma3", P2, IntervalBox.of(0.3, 0.31, 0.2, 0.2))


@given(st.floats(1e-3, 1.0), st.floats(0.0, 1.0))
def test_filter_enclosure_sound(lam, w):
    x = Interval(lam, min(1.0, lam * (1 + 0.01 * w)))
    f = enclose(P2, x, "f") if x.hi < P2.ill_edge or x.lo >= P2.ill_edge else None
    if f is None:
        return
    fv, gv = filter_values(P2, lam)
    assert f.contains(float(fv))
    assert enclose(P2, x, "g").contains(float(gv))


@settings(max_examples=60)
@given(st.floats(1.0, 50.0), st.sampled_from(["lemma1", "lemma2", "lemma3"]),
       st.integers(0, 2), st.integers(0, 2), st.floats(0, 1), st.floats(0, 1),
       st.floats(0, 1), st.floats(0, 1))
def test_sampled_ratio_below_box_upper_bound(kappa, ineq, r1, r2, a, b, c, d):
    p = KappaParams(kappa)
    edges = [1e-3, p.ill_edge, p.well_edge, 1.0]
    edges = sorted(set(min(max(e, 1e-3), 1.0) for e in edges))
    sides = [(lo, hi) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]
    s1, s2 = sides[r1 % len(sides)], sides[r2 % len(sides)]
    lo1 = s1[0] + a * (s1[1] - s1[0]) * 0.5
    hi1 = lo1 + b * (s1[1] - lo1)
    lo2 = s2[0] + c * (s2[1] - s2[0]) * 0.5
    hi2 = lo2 + d * (s2[1] - lo2)
    up = ratio_upper(ineq, p, Interval(lo1, hi1), Interval(lo2, hi2))
    fn = {"lemma1": lipschitz_ratio, "lemma2": lemma2_ratio}.get(ineq)
    rng = np.random.default_rng(0)
    x = rng.uniform(lo1, hi1, 200) if hi1 > lo1 else np.full(200, lo1)
    y = rng.uniform(lo2, hi2, 200) if hi2 > lo2 else np.full(200, lo2)
    keep = x != y
    if not keep.any():
        return
    vals = fn(p, x[keep], y[keep]) if fn else lemma3_ratio(p, 1.0, x[keep], y[keep])
    assert np.max(vals) <= up * (1 + 1e-9) + 1e-300


def test_prove_square_lemma2_kappa2():
    reps = prove_square("lemma2", P2, 1e-3, 1.0, budget=10**6)
    assert reps[-1].case == "global" and reps[-1].status == PASS
    assert reps[-1].sup <= 2 * PI2 * (1 + 1e-6)


def test_prove_square_lemma1_single_line():
    reps = prove_square("lemma1", P2, 1e-3, 1.0, budget=10**6)
    assert len(reps) == 1 and reps[0].status == PASS
    assert reps[0].sup <= math.pi / 2 * (1 + 1e-6)
