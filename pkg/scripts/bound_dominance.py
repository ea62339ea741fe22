"""Randomized check that the measured state error stays under the analytic bound.

    python3 scripts/bound_dominance.py --count 10000 --kernel nearest
"""
import argparse
import math
import time

import numpy as np

from hhlcert.sim import run_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=10**4)
    ap.add_argument("--kernel", default="nearest", choices=["nearest", "sinc", "sine"])
    ap.add_argument("--seed", type=int, default=20240501)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    fams = ("well", "mixed", "edge")
    t = time.perf_counter()
    viol, ratio, ident = 0, 0.0, 0.0
    for i in range(args.count):
        n = int(rng.integers(1, 17))
        kappa = float(np.exp(rng.uniform(0.0, math.log(100.0))))
        t0 = kappa * float(np.exp(rng.uniform(math.log(30.0), math.log(3000.0))))
        r = run_instance(kappa, t0, i, n, fams[i % 3], args.kernel)
        viol += not r.check.passed
        if r.check.error_bound > 0:
            ratio = max(ratio, r.overlap.error_norm / r.check.error_bound)
        ident = max(ident, r.overlap.identity_residual)
    print(f"{args.count} instances ({args.kernel}) in {time.perf_counter() - t:.1f}s: "
          f"{viol} violations, max error/bound {ratio:.4f}, max identity residual {ident:.2e}")


if __name__ == "__main__":
    main()
