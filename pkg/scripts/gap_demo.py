"""Size of the ill-branch term g~^2 when lam is Well but lam~ falls in T or I.

    python3 scripts/gap_demo.py --kappa 2,10
"""
import argparse

from hhlcert.certifier import demonstrate_original_gap


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappa", default="2")
    ap.add_argument("--grid", type=int, default=2000)
    args = ap.parse_args()
    for kappa in (float(k) for k in args.kappa.split(",")):
        print(f"kappa={kappa:g}")
        for r in demonstrate_original_gap(kappa, args.grid):
            print(f"  case {r.case}: max g~^2 = {r.max_contribution:.6f}"
                  f"  (share of lhs {r.max_fraction:.4f})  at lam={r.lambda_}, lam~={r.lambda_tilde}")


if __name__ == "__main__":
    main()
