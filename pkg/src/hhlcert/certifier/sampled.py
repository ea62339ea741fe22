"""Grid-sampled sup ratios for the Lipschitz bound and the two combined inequalities.

Ratios evaluated here (``u = kappa * lambda`` differences, ``S`` = f^2 + g^2):

* lemma1: ``max(|df|, |dg|) / (kappa |dl|)``
* lemma2: ``(df^2 + dg^2) / (kappa^2 dl^2 (S(l1) + S(l2)))`` over ``l1 > l2``
* lemma3: ``(df^2 + dg^2) / ((kappa/t0)^2 delta^2 S(l))`` over ordered ``(l, l~)``,
  with ``delta = t0 (l - l~)``; the normaliser uses the first argument only.

Pairs closer than ``SMALL_GAP`` are evaluated through their derivative limit.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from ..filters import (
    GenericFilter,
    _params,
    filter_derivatives,
    filter_difference,
    filter_values,
    norm_sq,
    region_codes,
    speed_sq,
)
from .constants import ClaimedConstants
from .grid import as_grid
from .report import SAMPLED, CertificationReport, judge

SMALL_GAP = 1e-12
_CHUNK_ELEMS = 1 << 21

LEMMA2_CASES = {(0, 0): 1, (0, 1): 2, (0, 2): 3, (1, 1): 4, (1, 2): 5, (2, 2): 6}


def lemma3_case(region_lam: int, region_tilde: int) -> int:
    return 3 * int(region_lam) + int(region_tilde) + 1


# -- pointwise ratios -------------------------------------------------------

def lipschitz_ratio(params, l1, l2, component: str = "max", filt: GenericFilter | None = None):
    p = _params(params)
    l1, l2 = np.broadcast_arrays(np.asarray(l1, float), np.asarray(l2, float))
    if filt is None:
        df, dg = filter_difference(p, l1, l2)
    else:
        df, dg = filt.difference(l1, l2)
    gap = l1 - l2
    small = np.abs(gap) < SMALL_GAP
    with np.errstate(divide="ignore", invalid="ignore"):
        den = p.kappa * np.abs(gap)
        rf, rg = np.abs(df) / den, np.abs(dg) / den
    if np.any(small):
        if filt is not None:
            rf, rg = np.where(small, 0.0, rf), np.where(small, 0.0, rg)
        else:
            fp, gp = filter_derivatives(p, 0.5 * (l1 + l2))
            rf = np.where(small, np.abs(fp) / p.kappa, rf)
            rg = np.where(small, np.abs(gp) / p.kappa, rg)
    return {"f": rf, "g": rg, "max": np.maximum(rf, rg)}[component]


def lemma2_ratio(params, l1, l2):
    p = _params(params)
    l1, l2 = np.broadcast_arrays(np.asarray(l1, float), np.asarray(l2, float))
    df, dg = filter_difference(p, l1, l2)
    lhs = df * df + dg * dg
    gap = l1 - l2
    small = np.abs(gap) < SMALL_GAP
    with np.errstate(divide="ignore", invalid="ignore"):
        r = lhs / ((p.kappa * gap) ** 2 * (norm_sq(p, l1) + norm_sq(p, l2)))
    if np.any(small):
        mid = 0.5 * (l1 + l2)
        r = np.where(small, speed_sq(p, mid) / (p.kappa**2 * 2.0 * norm_sq(p, mid)), r)
    return r


def lemma3_lhs(params, lam, lam_tilde):
    df, dg = filter_difference(params, lam, lam_tilde)
    return df * df + dg * dg


def lemma3_ratio(params, t0: float, lam, lam_tilde):
    p = _params(params)
    lam, lam_tilde = np.broadcast_arrays(np.asarray(lam, float), np.asarray(lam_tilde, float))
    lhs = lemma3_lhs(p, lam, lam_tilde)
    normal = norm_sq(p, lam)
    # f^2 + g^2 >= min(1/4, 1/(4 kappa^2 lam^2)) > 0 on lam > 0
    assert np.all(normal > 0.0)
    delta = t0 * (lam - lam_tilde)
    small = np.abs(lam - lam_tilde) < SMALL_GAP
    with np.errstate(divide="ignore", invalid="ignore"):
        r = lhs / ((p.kappa / t0) ** 2 * delta**2 * normal)
    if np.any(small):
        mid = 0.5 * (lam + lam_tilde)
        r = np.where(small, speed_sq(p, mid) / (p.kappa**2 * norm_sq(p, lam)), r)
    return r


# -- block reductions -------------------------------------------------------

@dataclass(frozen=True)
class _Best:
    value: float
    l1: float | None
    l2: float | None
    count: int

    @staticmethod
    def empty():
        return _Best(-np.inf, None, None, 0)


def _better(a: _Best, b: _Best) -> _Best:
    """Deterministic argmax: larger value, then lexicographically smaller (l1, l2)."""
    if b.l1 is None:
        return _Best(a.value, a.l1, a.l2, a.count + b.count)
    if a.l1 is None:
        return _Best(b.value, b.l1, b.l2, a.count + b.count)
    if (b.value > a.value) or (b.value == a.value and (b.l1, b.l2) < (a.l1, a.l2)):
        return _Best(b.value, b.l1, b.l2, a.count + b.count)
    return _Best(a.value, a.l1, a.l2, a.count + b.count)


def _reduce_chunk(vals: np.ndarray, l1: np.ndarray, l2: np.ndarray) -> _Best:
    if vals.size == 0:
        return _Best.empty()
    if np.any(np.isnan(vals)):
        i = int(np.flatnonzero(np.isnan(vals))[0])
        return _Best(np.nan, float(l1[i]), float(l2[i]), vals.size)
    m = vals.max()
    idx = np.flatnonzero(vals == m)
    j = idx[np.lexsort((l2[idx], l1[idx]))[0]]
    return _Best(float(m), float(l1[j]), float(l2[j]), vals.size)


def _block_tasks(xs: np.ndarray, ys: np.ndarray, mode: str):
    """Split the pair block xs x ys into row chunks; ``mode`` is 'gt', 'ne' or 'all'."""
    if xs.size == 0 or ys.size == 0:
        return []
    rows = max(1, _CHUNK_ELEMS // ys.size)
    return [(xs[i:i + rows], ys, mode) for i in range(0, xs.size, rows)]


def _run_tasks(fn, tasks, jobs: int) -> _Best:
    def work(task):
        xs, ys, mode = task
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        if mode == "gt":
            keep = X > Y
        elif mode == "ne":
            keep = X != Y
        else:
            keep = np.ones(X.shape, bool)
        X, Y = X[keep], Y[keep]
        return _reduce_chunk(fn(X, Y), X, Y)

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, tasks))
    else:
        results = [work(t) for t in tasks]
    best = _Best.empty()
    for r in results:
        if r.value != r.value:  # NaN poisons the sup
            return r
        best = _better(best, r)
    return best


def _report(ineq, case, p, t0, best: _Best, claimed, tol) -> CertificationReport:
    sup = best.value if best.count else 0.0
    return CertificationReport(
        inequality=ineq, case=str(case), kappa=p.kappa, t0=t0, sup=float(sup),
        claimed=float(claimed), rigor=SAMPLED, samples=int(best.count),
        lambda1=best.l1, lambda2=best.l2, status=judge(sup, claimed, tol), tol=tol,
    )


def _split_regions(p, grid):
    codes = region_codes(p, grid)
    return [grid[codes == r] for r in range(3)]


# -- public certification sweeps -------------------------------------------

def certify_lipschitz(params, grid=None, tol: float = 1e-6, jobs: int = 1,
                      filt: GenericFilter | None = None,
                      constants: ClaimedConstants | None = None) -> CertificationReport:
    p = _params(params)
    pts = as_grid(p, grid)
    if filt is None:
        claimed = (constants or ClaimedConstants()).c1
    else:
        claimed = filt.lipschitz / p.kappa
    tasks = _block_tasks(pts, pts, "gt")
    best = _run_tasks(lambda a, b: lipschitz_ratio(p, a, b, filt=filt), tasks, jobs)
    return _report("lemma1", "global", p, None, best, claimed, tol)


def certify_lemma2(params, grid=None, tol: float = 1e-6, jobs: int = 1,
                   constants: ClaimedConstants | None = None) -> list[CertificationReport]:
    p = _params(params)
    consts = constants or ClaimedConstants()
    regions = _split_regions(p, as_grid(p, grid))
    fn = lambda a, b: lemma2_ratio(p, a, b)  # noqa: E731
    reports, overall = [], _Best.empty()
    for (ra, rb), case in sorted(LEMMA2_CASES.items(), key=lambda kv: kv[1]):
        mode = "gt" if ra == rb else "all"
        best = _run_tasks(fn, _block_tasks(regions[ra], regions[rb], mode), jobs)
        reports.append(_report("lemma2", case, p, None, best, consts.lemma2_case(case), tol))
        overall = _better(overall, best)
    glob = _report("lemma2", "global", p, None, overall, consts.c2, tol)
    if not all(r.passed for r in reports):
        glob = _with_status(glob, "FAIL")
    return reports + [glob]


def certify_lemma3(params, t0: float, grid=None, tol: float = 1e-6, jobs: int = 1,
                   constants: ClaimedConstants | None = None) -> list[CertificationReport]:
    p = _params(params)
    if not t0 > 0:
        raise ConfigurationError("t0 must be positive")
    consts = constants or ClaimedConstants()
    regions = _split_regions(p, as_grid(p, grid))
    fn = lambda a, b: lemma3_ratio(p, t0, a, b)  # noqa: E731
    reports, overall = [], _Best.empty()
    for ra in range(3):
        for rb in range(3):
            case = lemma3_case(ra, rb)
            mode = "ne" if ra == rb else "all"
            best = _run_tasks(fn, _block_tasks(regions[ra], regions[rb], mode), jobs)
            reports.append(_report("lemma3", case, p, t0, best, consts.lemma3_case(case), tol))
            overall = _better(overall, best)
    glob = _report("lemma3", "global", p, t0, overall, consts.c_lemma3, tol)
    if not all(r.passed for r in reports):
        glob = _with_status(glob, "FAIL")
    return reports + [glob]


def _with_status(rep: CertificationReport, status: str) -> CertificationReport:
    from dataclasses import replace
    return replace(rep, status=status)


# -- the omitted g~ term ----------------------------------------------------

@dataclass(frozen=True)
class GapReport:
    """Size of the |g - g~|^2 = g~^2 term on pairs with lam >= 1/kappa."""

    case: int
    kappa: float
    max_contribution: float
    max_fraction: float
    lambda_: float | None
    lambda_tilde: float | None
    samples: int

    def to_dict(self) -> dict:
        return {
            "case": self.case, "kappa": self.kappa,
            "max_contribution": self.max_contribution, "max_fraction": self.max_fraction,
            "lambda": self.lambda_, "lambda_tilde": self.lambda_tilde, "samples": self.samples,
        }


def demonstrate_original_gap(params, grid=None) -> list[GapReport]:
    """Measure the g~ contribution for lam >= 1/kappa against lam~ in each region.

    Case 1 (lam~ Well) carries no contribution; Cases 2 and 3 do, reaching
    g~^2 = 1/4 once lam~ < 1/(2 kappa).
    """
    p = _params(params)
    regions = _split_regions(p, as_grid(p, grid))
    lam = regions[0]
    out = []
    for rb in range(3):
        tilde = regions[rb]
        case = lemma3_case(0, rb)
        if lam.size == 0 or tilde.size == 0:
            out.append(GapReport(case, p.kappa, 0.0, 0.0, None, None, 0))
            continue
        L, T = np.meshgrid(lam, tilde, indexing="ij")
        keep = L != T
        L, T = L[keep], T[keep]
        g_tilde = filter_values(p, T)[1]
        g_lam = filter_values(p, L)[1]
        contrib = (g_lam - g_tilde) ** 2
        total = lemma3_lhs(p, L, T)
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(total > 0, contrib / total, 0.0)
        best = _reduce_chunk(contrib, L, T)
        out.append(GapReport(case, p.kappa, best.value, float(frac.max()),
                             best.l1, best.l2, int(L.size)))
    return out
