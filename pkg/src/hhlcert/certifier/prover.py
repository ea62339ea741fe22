"""Interval branch-and-bound proofs of the sup-ratio bounds.

For a box ``I1 x I2`` up to three upper enclosures of the ratio are
available and the smallest one is used:

* direct: the ratio evaluated in interval arithmetic; requires ``I1 - I2``
  to exclude zero;
* mean-value: for a piecewise C^1 curve the chord never exceeds the arc, so
  ``|v(l1) - v(l2)| <= sup_H |v'| |l1 - l2|`` on the hull ``H`` of the two
  intervals.  This removes the singularity on the diagonal; with ``|v'|^2``
  and ``f^2 + g^2`` enclosed as single functions the bound is exact on the
  transition band (both are constants there);
* divided difference: when both sides share a region the branch formula's
  divided difference ``f[l1, l2]`` is enclosed directly (e.g.
  ``-1/(2 kappa l1 l2)`` on Well), which keeps the bound tight near tight
  corners such as ``l1 = l2 = 1/kappa``; on Well x Well the normaliser
  cancels exactly, leaving ``1/(kappa^2 l~^2)`` and
  ``1/(kappa^2 (l1^2 + l2^2))``.

Boxes whose upper bound exceeds the target are bisected along their wider
side.  A sampled point above the target yields a counterexample.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from ..filters import KappaParams, Region, _params
from . import interval as iv
from .constants import ClaimedConstants
from .interval import Interval
from .report import FAIL, INDETERMINATE, PASS, PROVED, CertificationReport
from .sampled import LEMMA2_CASES, lemma2_ratio, lemma3_ratio, lipschitz_ratio

_INF = math.inf


# -- enclosures of the filter over a lambda interval ------------------------

def _pieces(p: KappaParams, lam: Interval):
    """Closed pieces of ``lam`` in each region, as ``(Region, Interval)``."""
    out = []
    ill = lam.intersect(-_INF, p.ill_edge)
    if ill is not None:
        out.append((Region.ILL, ill))
    tr = lam.intersect(p.ill_edge, p.well_edge)
    if tr is not None:
        out.append((Region.TRANSITION, tr))
    well = lam.intersect(p.well_edge, _INF)
    if well is not None:
        out.append((Region.WELL, well))
    return out


def _angles(p: KappaParams, x: Interval):
    s = (x - p.ill_edge) / p.ill_edge
    return iv.HALF_PI * s, iv.HALF_PI * (1.0 - s)


def _slope(p: KappaParams) -> Interval:
    return iv.PI / (4.0 * p.ill_edge)


def _branch(p: KappaParams, region: Region, x: Interval, what: str) -> Interval:
    hi = p.well_edge
    if region is Region.ILL:
        return {"f": Interval(0.0, 0.0), "g": Interval(0.5, 0.5), "fp": Interval(0.0, 0.0),
                "gp": Interval(0.0, 0.0), "speed2": Interval(0.0, 0.0),
                "norm2": Interval(0.25, 0.25)}[what]
    if region is Region.TRANSITION:
        if what == "norm2":
            return Interval(0.25, 0.25)
        if what == "speed2":
            return _slope(p).sqr()
        a_f, a_g = _angles(p, x)
        if what == "f":
            return 0.5 * iv.sin(a_f)
        if what == "g":
            return 0.5 * iv.sin(a_g)
        if what == "fp":
            return _slope(p) * iv.cos(a_f)
        if what == "gp":
            return -(_slope(p) * iv.sin(a_f))
    if region is Region.WELL:
        if what == "f":
            return Interval.point(hi) / (2.0 * x)
        if what == "g":
            return Interval(0.0, 0.0)
        if what == "fp":
            return -(Interval.point(hi) / (2.0 * x.sqr()))
        if what == "gp":
            return Interval(0.0, 0.0)
        if what == "speed2":
            return (Interval.point(hi) / (2.0 * x.sqr())).sqr()
        if what == "norm2":
            return (Interval.point(hi) / (2.0 * x)).sqr()
    raise KeyError(what)


def enclose(params, lam: Interval, what: str) -> Interval:
    """Enclosure of ``what`` in {f, g, fp, gp, speed2, norm2} over ``lam``."""
    p = _params(params)
    if lam.lo <= 0.0:
        raise ConfigurationError("interval must lie in lambda > 0")
    return Interval.hull(*(_branch(p, r, x, what) for r, x in _pieces(p, lam)))


def _same_region(p: KappaParams, i1: Interval, i2: Interval) -> Region | None:
    try:
        r1, r2 = _region_of(p, i1), _region_of(p, i2)
    except ConfigurationError:
        return None
    return r1 if r1 is r2 else None


def divided_differences(params, i1: Interval, i2: Interval):
    """Enclosures of ``f[l1, l2]`` and ``g[l1, l2]`` when both sides share a region.

    The branch formulas are divided analytically, so the enclosure stays tight
    on and near the diagonal.  Returns None for boxes spanning two regions.
    """
    p = _params(params)
    region = _same_region(p, i1, i2)
    if region is None:
        return None
    if region is Region.ILL:
        return Interval(0.0, 0.0), Interval(0.0, 0.0)
    if region is Region.WELL:
        return -(Interval.point(p.well_edge) / (2.0 * (i1 * i2))), Interval(0.0, 0.0)
    w = p.ill_edge
    s1 = (i1 - w) / w
    s2 = (i2 - w) / w
    q = iv.PI * 0.25
    sn = iv.sinc(q * (s1 - s2))
    slope = _slope(p)
    df = slope * iv.cos(q * (s1 + s2)) * sn
    dg = -(slope * iv.cos(q * (2.0 - s1 - s2)) * sn)
    return df, dg


# -- ratio enclosures -------------------------------------------------------

def ratio_upper(inequality: str, params, i1: Interval, i2: Interval) -> float:
    """Rigorous upper bound of the ratio over the box ``i1 x i2``."""
    p = _params(params)
    k = Interval.point(p.kappa)
    hull = Interval.hull(i1, i2)
    gap = i1 - i2
    separated = not gap.contains_zero()

    dd = divided_differences(p, i1, i2)

    if inequality == "lemma1":
        mv = max(enclose(p, hull, "fp").mag(), enclose(p, hull, "gp").mag())
        best = (Interval.point(mv) / k).hi
        if dd is not None:
            best = min(best, (Interval.point(max(dd[0].mag(), dd[1].mag())) / k).hi)
        if separated:
            den = k * gap.abs()
            df = (enclose(p, i1, "f") - enclose(p, i2, "f")).abs()
            dg = (enclose(p, i1, "g") - enclose(p, i2, "g")).abs()
            best = min(best, max((df / den).hi, (dg / den).hi))
        return best

    if inequality == "lemma2":
        normal = enclose(p, i1, "norm2") + enclose(p, i2, "norm2")
    elif inequality == "lemma3":
        normal = enclose(p, i1, "norm2")
    else:
        raise ValueError(f"unknown inequality {inequality!r}")
    if normal.lo <= 0.0:
        return _INF
    k2 = k.sqr()
    best = (enclose(p, hull, "speed2") / (k2 * normal)).hi
    if dd is not None:
        best = min(best, ((dd[0].sqr() + dd[1].sqr()) / (k2 * normal)).hi)
        if _same_region(p, i1, i2) is Region.WELL:
            # the common 1/(2 kappa l) factors cancel in closed form
            den = i2.sqr() if inequality == "lemma3" else i1.sqr() + i2.sqr()
            best = min(best, (1.0 / (k2 * den)).hi)
    if separated:
        df = enclose(p, i1, "f") - enclose(p, i2, "f")
        dg = enclose(p, i1, "g") - enclose(p, i2, "g")
        lhs = df.sqr() + dg.sqr()
        best = min(best, (lhs / (k2 * gap.sqr() * normal)).hi)
    return best


def _point_ratio(inequality, p, l1, l2, t0) -> float:
    if inequality == "lemma1":
        return float(lipschitz_ratio(p, l1, l2))
    if inequality == "lemma2":
        return float(lemma2_ratio(p, l1, l2))
    return float(lemma3_ratio(p, t0 or 1.0, l1, l2))


# -- boxes ------------------------------------------------------------------

@dataclass(frozen=True)
class IntervalBox:
    lam1: Interval
    lam2: Interval

    @classmethod
    def of(cls, lo1, hi1, lo2, hi2) -> "IntervalBox":
        return cls(Interval(float(lo1), float(hi1)), Interval(float(lo2), float(hi2)))

    def split(self):
        w1 = self.lam1.width / max(self.lam1.mag(), 1e-300)
        w2 = self.lam2.width / max(self.lam2.mag(), 1e-300)
        if w1 >= w2:
            m = self.lam1.mid
            return (IntervalBox(Interval(self.lam1.lo, m), self.lam2),
                    IntervalBox(Interval(m, self.lam1.hi), self.lam2))
        m = self.lam2.mid
        return (IntervalBox(self.lam1, Interval(self.lam2.lo, m)),
                IntervalBox(self.lam1, Interval(m, self.lam2.hi)))

    def region_pair(self, params):
        p = _params(params)
        return _region_of(p, self.lam1), _region_of(p, self.lam2)


def _region_of(p: KappaParams, x: Interval) -> Region:
    """Region whose closure contains ``x``; a box may touch the upper edge of its region."""
    edges = {Region.ILL: (0.0, p.ill_edge), Region.TRANSITION: (p.ill_edge, p.well_edge),
             Region.WELL: (p.well_edge, _INF)}
    for reg, (lo, hi) in edges.items():
        if lo <= x.lo and x.hi <= hi and (x.lo < hi or reg is Region.WELL):
            return reg
    raise ConfigurationError(f"box side {x!r} straddles a region boundary")


def _case_of(inequality: str, regions) -> str:
    a, b = int(regions[0]), int(regions[1])
    if inequality == "lemma3":
        return str(3 * a + b + 1)
    if inequality == "lemma2":
        return str(LEMMA2_CASES[(min(a, b), max(a, b))])
    return "global"


# -- branch and bound -------------------------------------------------------

def prove_sup_bound(inequality: str, case, params, box: IntervalBox, budget: int = 10**6,
                    t0: float | None = None, target: float | None = None,
                    slack: float = 1e-6, constants: ClaimedConstants | None = None,
                    min_width: float = 1e-14) -> CertificationReport:
    """Prove ``ratio <= target * (1 + slack)`` on the whole box or find a violation.

    ``target`` defaults to the claimed constant for ``(inequality, case)``.
    The returned ``sup`` is the largest proved upper bound over the leaves;
    for a FAIL it is the violating sampled value.
    """
    p = _params(params)
    consts = constants or ClaimedConstants()
    regions = box.region_pair(p)
    actual_case = _case_of(inequality, regions)
    if case is not None and str(case) != actual_case and inequality != "lemma1":
        raise ConfigurationError(f"box lies in case {actual_case}, not {case}")
    claimed = consts.claimed(inequality, None if inequality == "lemma1" else int(actual_case))
    goal = claimed if target is None else float(target)
    limit = goal * (1.0 + slack)

    heap = [(-_INF, 0, box)]
    counter = 1
    processed = 0
    proved_max = -_INF
    lower = (-_INF, None, None)
    unresolved = False

    while heap:
        if processed >= budget:
            unresolved = True
            break
        _, _, b = heapq.heappop(heap)
        processed += 1
        l1, l2 = b.lam1.mid, b.lam2.mid
        if inequality == "lemma2" and l1 < l2:
            l1, l2 = l2, l1
        val = _point_ratio(inequality, p, l1, l2, t0)
        if val > lower[0]:
            lower = (val, l1, l2)
        if val > limit:
            return CertificationReport(
                inequality, actual_case, p.kappa, t0, val, goal, PROVED, processed,
                l1, l2, FAIL, slack)
        up = ratio_upper(inequality, p, b.lam1, b.lam2)
        if up <= limit:
            proved_max = max(proved_max, up)
            continue
        if max(b.lam1.width, b.lam2.width) <= min_width:
            unresolved = True
            continue
        for child in b.split():
            heapq.heappush(heap, (-up, counter, child))
            counter += 1

    if unresolved:
        return CertificationReport(
            inequality, actual_case, p.kappa, t0, _INF, goal, PROVED, processed,
            lower[1], lower[2], INDETERMINATE, slack)
    return CertificationReport(
        inequality, actual_case, p.kappa, t0, float(proved_max), goal, PROVED, processed,
        lower[1], lower[2], PASS, slack)


def region_boxes(inequality: str, params, lo: float, hi: float):
    """Split the square ``[lo, hi]^2`` into one box per case region.

    For the symmetric Lemma-2 ratio only the ``lam1 >= lam2`` half is needed.
    """
    p = _params(params)
    cuts = [lo] + [c for c in (p.ill_edge, p.well_edge) if lo < c < hi] + [hi]
    sides = [Interval(a, b) for a, b in zip(cuts[:-1], cuts[1:])]
    boxes = []
    for a in sides:
        for b in sides:
            if inequality == "lemma2" and a.lo < b.lo:
                continue
            boxes.append(IntervalBox(a, b))
    return boxes


def prove_square(inequality: str, params, lo: float = 1e-3, hi: float = 1.0,
                 budget: int = 10**6, t0: float | None = None, slack: float = 1e-6,
                 constants: ClaimedConstants | None = None) -> list[CertificationReport]:
    """Prove every case box of ``[lo, hi]^2`` within a shared box budget, plus a global line."""
    p = _params(params)
    consts = constants or ClaimedConstants()
    reports, used = [], 0
    for b in region_boxes(inequality, p, lo, hi):
        rep = prove_sup_bound(inequality, None, p, b, budget=max(budget - used, 1), t0=t0,
                              slack=slack, constants=consts)
        used += rep.samples
        reports.append(rep)
    status = PASS
    if any(r.status == FAIL for r in reports):
        status = FAIL
    elif any(r.status != PASS for r in reports):
        status = INDETERMINATE
    sup = max(r.sup for r in reports)
    claim = consts.claimed(inequality, None)
    worst = max(reports, key=lambda r: r.sup)
    reports.append(CertificationReport(inequality, "global", p.kappa, t0, sup, claim, PROVED,
                                       used, worst.lambda1, worst.lambda2, status, slack))
    if inequality == "lemma1":
        # no case split: the per-box lines only tile the square
        return reports[-1:]
    return reports


def box_point_check(inequality, params, box: IntervalBox, t0=None) -> float:
    """Ratio at a degenerate (single-point) box, or NaN for a diagonal point."""
    p = _params(params)
    if box.lam1.width or box.lam2.width:
        raise ValueError("box is not a single point")
    return _point_ratio(inequality, p, box.lam1.lo, box.lam2.lo, t0)


__all__ = ["IntervalBox", "enclose", "ratio_upper", "prove_sup_bound", "prove_square",
           "region_boxes", "box_point_check"]
