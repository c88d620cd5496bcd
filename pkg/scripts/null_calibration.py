"""Error-rate calibration under Sigma = I (every discovery is false).

    python scripts/null_calibration.py --p 1000 --reps 200
    python scripts/null_calibration.py --p 10000 --reps 1000   # hours
"""

from __future__ import annotations

import argparse

from parsec import experiments as ex
from parsec.inference import ErrorControlSpec


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--p", type=int, nargs="+", default=[1000])
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--kfwer-pct", type=float, default=0.05)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/null_calibration")
    args = ap.parse_args()
    for p in args.p:
        specs = [
            ErrorControlSpec("fwer", args.alpha),
            ErrorControlSpec("kfwer", args.alpha, k=ex.kfwer_k(args.kfwer_pct, p)),
            ErrorControlSpec("fdr-bh", args.alpha),
            ErrorControlSpec("fdr-by", args.alpha),
            ErrorControlSpec("pfdr", args.alpha),
        ]
        rep = ex.null_calibration(args.n, p, args.reps, specs, args.seed, workers=args.workers)
        rep.write_all(f"{args.out}_p{p}")
        for a in rep.aggregates:
            rate = a["exceed_fraction"] if a["control"] in ex.FWER_FAMILY else a["mean_fdp"]
            print(f"p={p:6d} {a['method']:16s} {a['control']:7s} k={a['k']:<8d} rate={rate:.3f}")


if __name__ == "__main__":
    main()
