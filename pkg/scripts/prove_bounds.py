"""Interval branch-and-bound proofs, at the claimed constants and tight to the sampled sups.

    python3 scripts/prove_bounds.py --kappa 2 --rel 1e-3
"""
import argparse
import time

from hhlcert.certifier import (certify_lemma2, certify_lemma3, prove_square, prove_sup_bound,
                               region_boxes)
from hhlcert.certifier.prover import _case_of
from hhlcert.filters import KappaParams


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappa", type=float, default=2.0)
    ap.add_argument("--t0", type=float, default=100.0)
    ap.add_argument("--lo", type=float, default=1e-3)
    ap.add_argument("--budget", type=int, default=10**6)
    ap.add_argument("--rel", type=float, default=1e-3,
                    help="relative gap allowed between the proved and the sampled sup")
    args = ap.parse_args()
    p = KappaParams(args.kappa)
    for ineq in ("lemma1", "lemma2", "lemma3"):
        t = time.perf_counter()
        reps = prove_square(ineq, p, args.lo, 1.0, args.budget, t0=args.t0)
        print(f"{ineq} at claimed constants ({time.perf_counter() - t:.2f}s)")
        for r in reps:
            print(f"  case {r.case:>6s}  proved <= {r.sup:.10g}  claimed {r.claimed:.6g}"
                  f"  boxes {r.samples}  {r.status}")
    sampled = {"lemma2": {r.case: r.sup for r in certify_lemma2(p, 4000)},
               "lemma3": {r.case: r.sup for r in certify_lemma3(p, args.t0, 4000)}}
    for ineq, grid in sampled.items():
        print(f"{ineq} tight to {args.rel:g} of the sampled sup")
        for box in region_boxes(ineq, p, args.lo, 1.0):
            case = _case_of(ineq, box.region_pair(p))
            r = prove_sup_bound(ineq, case, p, box, args.budget, t0=args.t0,
                                target=grid[case] * (1 + args.rel), slack=0.0)
            print(f"  case {case}: sampled {grid[case]:.10g}  proved <= {r.sup:.10g}"
                  f"  boxes {r.samples}  {r.status}")


if __name__ == "__main__":
    main()
