"""Acceptance gate: one test per criterion, each at its stated tolerance and time limit.

A summary line per criterion is printed at the end of the pytest run.
"""
import math
import time
import warnings

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE
from hhlcert.certifier import (IntervalBox, certify_lemma2, certify_lemma3, certify_lipschitz,
                               demonstrate_original_gap, prove_square, prove_sup_bound,
                               region_boxes)
from hhlcert.certifier.prover import _case_of
from hhlcert.filters import KappaParams
from hhlcert.linalg import eigendecompose, make_matrix_with_spectrum
from hhlcert.sim import random_instance, run_instance, scaling_sweep, simulate

PI, PI2 = math.pi, math.pi**2
BIG = PI**4 / 2 + PI2


class Gate:
    """Collects named checks for one criterion and records a summary line."""

    def __init__(self, num):
        self.num, self.checks, self.t = num, [], time.perf_counter()

    def check(self, ok, text):
        self.checks.append((bool(ok), text))

    def close(self, limit=None, extra=""):
        dt = time.perf_counter() - self.t
        if limit is not None:
            self.check(dt < limit, f"runtime {dt:.1f}s < {limit:g}s")
        ok = all(c for c, _ in self.checks)
        failed = [t for c, t in self.checks if not c]
        text = extra or "; ".join(t for _, t in self.checks)
        if failed:
            text += " | failed: " + "; ".join(failed)
        ACCEPTANCE[self.num] = (ok, f"{text} ({dt:.1f}s)")
        assert ok, failed


def test_criterion_1_lipschitz():
    g = Gate(1)
    for kappa in (1.0, 2.0, 10.0, 100.0):
        rep = certify_lipschitz(kappa, 2000)
        g.check(PI / 2 - 1e-3 <= rep.sup <= PI / 2 + 1e-9, f"kappa={kappa:g} sup={rep.sup:.10f}")
    g.close(10)


def test_criterion_2_lemma2():
    g = Gate(2)
    reps = certify_lemma2(2.0, 4000)
    pairs = sum(r.samples for r in reps if r.case != "global")
    for r in reps:
        g.check(r.sup <= 2 * PI2 and r.margin > 0, f"case {r.case} sup={r.sup:.6g}")
    g.check(reps[0].case == "1" and reps[0].sup <= 0.5 + 1e-6, f"case 1 sup={reps[0].sup:.10f}")
    # 4000^2 ordered pairs, halved by symmetry
    g.check(pairs >= 4000 * 3999 // 2, f"{pairs} pairs")
    g.close(30, f"max sup {reps[-1].sup:.6f} <= 2pi^2, case 1 sup {reps[0].sup:.10f}, {pairs} pairs")


def test_criterion_3_lemma3():
    g = Gate(3)
    by = {r.case: r for r in certify_lemma3(2.0, 100.0, 4000)}
    s = {c: r.sup for c, r in by.items()}
    g.check(PI2 - 1e-2 <= s["5"] <= PI2 + 1e-9, f"case 5 sup={s['5']:.10f}")
    g.check(s["2"] <= BIG and s["4"] <= BIG, f"cases 2/4 sup={s['2']:.6g}/{s['4']:.6g}")
    g.check(s["3"] <= 8 and s["7"] <= 8, f"cases 3/7 sup={s['3']:.8g}/{s['7']:.8g}")
    g.check(s["9"] == 0.0, "case 9 sup=0")
    g.check(s["global"] <= BIG, f"global {s['global']:.6g} <= {BIG:.2f}")
    g.check(all(r.status == "PASS" for r in by.values()), "all PASS")
    g.close(60, f"case 5 {s['5']:.10f}, cases 3/7 {max(s['3'], s['7']):.8f}, case 9 0, "
                f"global {s['global']:.6f}")


def test_criterion_4_interval_proofs():
    g = Gate(4)
    p = KappaParams(2.0)
    reps = prove_square("lemma2", p, 1e-3, 1.0, budget=10**6)
    g.check(all(r.status == "PASS" for r in reps), "lemma 2 square proved at claimed constants")
    # agreement: each case's proved sup sits within 1e-3 relative of the grid sup
    grid = {r.case: r.sup for r in certify_lemma2(p, 4000)}
    used = 0
    for box in region_boxes("lemma2", p, 1e-3, 1.0):
        case = _case_of("lemma2", box.region_pair(p))
        tight = prove_sup_bound("lemma2", case, p, box, budget=10**6,
                                target=grid[case] * (1 + 1e-3), slack=0.0)
        used += tight.samples
        g.check(tight.status == "PASS" and grid[case] <= tight.sup,
                f"case {case}: grid {grid[case]:.6g} <= proved {tight.sup:.6g}")
    c5 = prove_sup_bound("lemma3", 5, p, IntervalBox.of(p.ill_edge, p.well_edge, p.ill_edge,
                                                        p.well_edge), budget=10**6, t0=100.0)
    g5 = {r.case: r.sup for r in certify_lemma3(p, 100.0, 4000)}["5"]
    g.check(c5.status == "PASS" and g5 <= c5.sup <= PI2 * (1 + 1e-6),
            f"lemma 3 case 5 proved {c5.sup:.10f} vs grid {g5:.10f}")
    g.close(300, f"lemma 2 square PASS, per-case tight to 1e-3 ({used} boxes); "
                 f"lemma 3 case 5 proved {c5.sup:.10f} ({c5.samples} boxes)")


def _random_instances(count):
    rng = np.random.default_rng(20240501)
    fams = ("well", "mixed", "edge")
    for i in range(count):
        n = int(rng.integers(1, 17))
        kappa = float(np.exp(rng.uniform(0.0, math.log(100.0))))
        t0 = kappa * float(np.exp(rng.uniform(math.log(30.0), math.log(3000.0))))
        yield i, n, kappa, t0, fams[i % 3]


@pytest.fixture(scope="module")
def bulk_results():
    t = time.perf_counter()
    out = [run_instance(kappa, t0, i, n, fam, "nearest")
           for i, n, kappa, t0, fam in _random_instances(10**4)]
    return out, time.perf_counter() - t


def test_criterion_5_bound_dominance(bulk_results):
    g = Gate(5)
    res, dt = bulk_results
    err_bad = sum(not r.check.error_ok for r in res)
    ovl_bad = sum(not r.check.overlap_ok for r in res)
    g.check(len(res) == 10**4, f"{len(res)} instances")
    g.check(err_bad == 0, f"{err_bad} error-norm violations")
    g.check(ovl_bad == 0, f"{ovl_bad} overlap violations")
    g.check(dt < 120, f"runtime {dt:.1f}s < 120s")
    tightest = max(r.overlap.error_norm / r.check.error_bound for r in res if r.check.error_bound)
    g.close(None, f"{len(res)} instances, violations: error {err_bad}, overlap {ovl_bad}; "
                  f"max error/bound {tightest:.3f}, sim {dt:.1f}s")


def test_criterion_6_identity(bulk_results):
    g = Gate(6)
    res, _ = bulk_results
    worst = max(r.overlap.identity_residual for r in res)
    g.check(worst <= 1e-12, f"max residual {worst:.2e}")
    g.close(None, f"max identity residual {worst:.2e} over {len(res)} instances")


def test_criterion_7_scaling():
    g = Gate(7)
    t = scaling_sweep([10.0], list(np.geomspace(1e3, 1e5, 5)), seeds=range(50), n=8,
                      family="well", jobs=4)
    slope = t.slopes_t0[10.0]
    g.check(-1.15 <= slope <= -0.85, f"slope vs t0 {slope:.3f}")
    inv = scaling_sweep([2.0, 10.0, 50.0], t0_per_kappa=[100.0], seeds=range(50), n=8,
                        family="edge", jobs=4)
    worst = list(inv.worst().values())
    ratio = max(worst) / min(worst)
    g.check(ratio <= 1.5, f"invariance ratio {ratio:.3f}")
    g.close(None, f"slope {slope:.3f} in [-1.15, -0.85]; worst error across kappa "
                  f"{[round(w, 5) for w in worst]}, ratio {ratio:.3f} <= 1.5")


def test_criterion_8_oracles():
    g = Gate(8)
    rng = np.random.default_rng(8)
    worst = 0.0
    for i in range(100):
        n = int(rng.integers(1, 5))
        kappa = float(rng.uniform(1.5, 20.0))
        t0 = kappa * float(rng.uniform(10.0, 300.0))
        fam = ("well", "mixed")[i % 2]
        inst = random_instance([8, i], n, kappa, fam)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            r, _ = simulate(inst.decomp, inst.b, kappa, t0)
        re, _, _ = oracles.brute_overlap(inst.decomp.eigenvalues, inst.decomp.eigenvectors,
                                         inst.b.b, kappa, t0)
        worst = max(worst, abs(r.re_overlap - re))
    g.check(worst <= 1e-12, f"max |overlap - brute| {worst:.1e}")
    rel = 0.0
    for n in (2, 4, 8, 16, 32, 64):
        for seed in range(3):
            lam = np.random.default_rng([n, seed]).uniform(-1.0, 1.0, n)
            A = make_matrix_with_spectrum(np.abs(lam) + 1e-3, seed=seed)
            d = eigendecompose(A)
            rel = max(rel, d.residual / (1e-10 * n * A.max_abs_entry()))
    g.check(rel <= 1.0, f"Jacobi residual at {rel:.1e} of the allowed level")
    g.close(None, f"overlap vs brute force {worst:.1e} <= 1e-12 on 100 instances; "
                  f"Jacobi residual / (1e-10 n max|a|) <= {rel:.1e} for n <= 64")


def test_criterion_9_gap():
    g = Gate(9)
    reps = {r.case: r for r in demonstrate_original_gap(2.0, 2000)}
    c3 = reps[3].max_contribution
    g.check(c3 >= 0.2499, f"case 3 g~^2 contribution {c3:.6f}")
    g.check(reps[1].max_contribution == 0.0, "case 1 contribution 0")
    g.close(None, f"case 3 g~^2 reaches {c3:.6f} >= 0.2499; case 2 {reps[2].max_contribution:.4f}; "
                  f"case 1 0")
