"""Sampled sup ratios for the three filter inequalities across kappa.

    python3 scripts/certify_constants.py --kappa 1,2,10,100 --grid 4000 --out results/
"""
import argparse
import os
import time

from hhlcert.certifier import certify_lemma2, certify_lemma3, certify_lipschitz, to_csv
from hhlcert.plotting import write_plot


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappa", default="1,2,10,100")
    ap.add_argument("--t0", type=float, default=100.0)
    ap.add_argument("--grid", type=int, default=4000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    reps = []
    for kappa in (float(k) for k in args.kappa.split(",")):
        t = time.perf_counter()
        batch = [certify_lipschitz(kappa, args.grid, jobs=args.jobs)]
        batch += certify_lemma2(kappa, args.grid, jobs=args.jobs)
        batch += certify_lemma3(kappa, args.t0, args.grid, jobs=args.jobs)
        print(f"kappa={kappa:g}: {len(batch)} reports in {time.perf_counter() - t:.1f}s")
        for r in batch:
            print(f"  {r.inequality:7s} case {r.case:>6s}  sup {r.sup:.10g}  claimed {r.claimed:.6g}"
                  f"  {r.status}")
        reps += batch
    with open(os.path.join(args.out, "certify.csv"), "w") as fh:
        fh.write(to_csv(reps))
    first = reps[0].kappa
    rows = [{"inequality": r.inequality, "case": r.case, "sup": r.sup, "claimed": r.claimed}
            for r in reps if r.kappa == first]
    write_plot(os.path.join(args.out, "certify.svg"), rows, "sup-ratio")


if __name__ == "__main__":
    main()
