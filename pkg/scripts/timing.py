"""Wall time of the scalable route against p and thread count."""

from __future__ import annotations

import argparse
import json
import os
import time

import numpy as np

from parsec.core import parsec_base, parsec_scalable
from parsec.uscore import uscores


def wall(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--p", type=int, nargs="+", default=[500, 1000, 2000, 4000])
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 2, 4])
    ap.add_argument("--base-max-p", type=int, default=1000, help="skip the per-row route above this p")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--out", default="results/timing.json")
    args = ap.parse_args()
    rows = []
    for p in args.p:
        u = uscores(np.random.default_rng(p).standard_normal((args.n, p)))
        for t in args.threads:
            secs = wall(lambda: parsec_scalable(u, threads=t), args.repeats)
            rows.append({"p": p, "route": "scalable", "threads": t, "seconds": secs})
            print(f"p={p:6d} scalable threads={t} {secs:.3f}s")
        if p <= args.base_max_p:
            secs = wall(lambda: parsec_base(u), 1)
            rows.append({"p": p, "route": "base", "threads": 1, "seconds": secs})
            print(f"p={p:6d} base     threads=1 {secs:.3f}s")
    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w") as fh:
        json.dump({"n": args.n, "cpus": os.cpu_count(), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
