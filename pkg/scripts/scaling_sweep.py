"""Worst-case state error against t0 at fixed kappa, and under t0 = c * kappa.

    python3 scripts/scaling_sweep.py --kernel nearest --seeds 50 --out results/
"""
import argparse
import os

import numpy as np

from hhlcert.plotting import write_plot
from hhlcert.sim import scaling_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kernel", default="nearest", choices=["nearest", "sinc", "sine"])
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    seeds = range(args.seeds)

    t = scaling_sweep([10.0], list(np.geomspace(1e3, 1e5, 5)), args.kernel, seeds, args.n,
                      "well", jobs=args.jobs)
    print(f"kappa=10, family well: slope of worst error vs t0 = {t.slopes_t0[10.0]:.3f}")
    for (k, t0), e in sorted(t.worst().items()):
        print(f"  t0={t0:10.1f}  worst error {e:.3e}")
    with open(os.path.join(args.out, f"sweep-t0-{args.kernel}.csv"), "w") as fh:
        fh.write(t.to_csv())
    write_plot(os.path.join(args.out, f"sweep-t0-{args.kernel}.svg"),
               [r.row() for r in t.rows if r.overlap.error_norm > 0], "scaling")

    for fam in ("edge", "well"):
        inv = scaling_sweep([2.0, 10.0, 50.0], kernel=args.kernel, seeds=seeds, n=args.n,
                            family=fam, t0_per_kappa=[100.0], jobs=args.jobs)
        w = inv.worst()
        ratio = max(w.values()) / min(w.values())
        print(f"t0 = 100 kappa, family {fam}: worst errors "
              f"{', '.join(f'{e:.4g}' for e in w.values())}, ratio {ratio:.3f}")


if __name__ == "__main__":
    main()
