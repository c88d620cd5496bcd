"""Command-line entry point: ``parsec {screen,simulate,experiment,estimate}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .edges import EdgeSet
from .estimation import EdgeStructure, concord_estimate, gaussian_estimate, mvp_weights, sample_covariance
from .inference import ErrorControlSpec
from .ingest import DataError, load_matrix, write_edges, write_matrix, write_pairs, read_edges
from .screening import METHODS, screen
from .simgen import StructureSpec, build_structure, sample_gaussian, sample_mvt
from .core import SYMMETRIZE_MODES

log = logging.getLogger("parsec")

STRUCTURE_NAMES = {
    "diag": "diagonal",
    "ar-block": "ar_block",
    "block": "block",
    "star-connected": "star_connected",
    "star-disconnected": "star_disconnected",
}


def _threads(value: str | None) -> int:
    raw = value if value is not None else os.environ.get("PARSEC_THREADS", "1")
    try:
        t = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"thread count must be an integer, got {raw!r}") from None
    if t < 1:
        raise argparse.ArgumentTypeError("thread count must be positive")
    return t


def _dump(obj, path: Path) -> None:
    path.write_text(json.dumps(ex._plain(obj), indent=2, sort_keys=True) + "\n")


def _sidecar(path, suffix: str = ".summary.json") -> Path:
    path = Path(path)
    return path.with_name(path.name + suffix) if path.suffix == "" else path.with_suffix(suffix)


# ---------------------------------------------------------------------------
# argument groups
# ---------------------------------------------------------------------------


def _add_structure_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--structure", choices=sorted(STRUCTURE_NAMES), default="ar-block")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--p", type=int, required=True, help="number of features")
    p.add_argument("--a", type=int, default=50, help="size of the dependent block (ar-block, block)")
    p.add_argument("--d", type=int, default=1, help="AR order")
    p.add_argument("--phi1", type=float, default=0.7, help="leading AR coefficient")
    p.add_argument("--rho", type=float, default=0.7, help="within-block correlation (block)")
    p.add_argument("--k-stars", type=int, default=10, help="number of stars")
    p.add_argument("--e", type=int, default=4, help="leaves per star")
    p.add_argument("--c", type=float, default=-0.35, help="star precision entry")
    p.add_argument("--dist", choices=["gaussian", "t"], default="gaussian")
    p.add_argument("--nu", type=float, default=3.0, help="degrees of freedom for --dist t")


def _structure(args) -> StructureSpec:
    return StructureSpec(
        STRUCTURE_NAMES[args.structure], args.p, a=min(args.a, args.p), d=args.d, phi1=args.phi1,
        rho=args.rho, k_stars=args.k_stars, e=args.e, c=args.c,
    )


def _setting(args) -> ex.Setting:
    return ex.Setting(_structure(args), args.n, args.dist, args.nu if args.dist == "t" else None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parsec", description="Partial-correlation screening toolkit.")
    ap.add_argument("--threads", default=None, help="worker threads (default: $PARSEC_THREADS or 1)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("screen", help="screen a data matrix for partial-correlation edges")
    s.add_argument("--input", required=True)
    s.add_argument("--method", choices=METHODS, default="parsec-scalable")
    s.add_argument("--control", choices=["fwer", "kfwer", "fdr-bh", "fdr-by", "pfdr", "rho"], default="fwer")
    s.add_argument("--alpha", type=float, default=0.05)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--rho", type=float, default=None)
    s.add_argument("--output", required=True, help="edge list CSV; a .summary.json sidecar is written next to it")
    s.add_argument("--low-memory", action="store_true", help="stream H in row blocks")
    s.add_argument("--symmetrize", choices=SYMMETRIZE_MODES, default="upper-triangle")
    s.add_argument("--delimiter", default=",")
    s.add_argument("--no-header", action="store_true")

    m = sub.add_parser("simulate", help="draw a data matrix from a covariance structure")
    _add_structure_args(m)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--output", required=True)
    m.add_argument("--edges-output", default=None, help="write the true edges as an i,j CSV")

    e = sub.add_parser("experiment", help="run a simulation experiment")
    esub = e.add_subparsers(dest="experiment", required=True)

    nc = esub.add_parser("null-calibration")
    nc.add_argument("--n", type=int, default=30)
    nc.add_argument("--p", type=int, default=1000)
    nc.add_argument("--reps", type=int, default=200)
    nc.add_argument("--alpha", type=float, default=0.05)
    nc.add_argument("--kfwer-pct", type=float, default=0.05, help="k as a fraction of p(p-1)/2")
    nc.add_argument("--controls", nargs="+", default=["fwer", "kfwer", "fdr-bh", "fdr-by", "pfdr"])
    nc.add_argument("--seed", type=int, default=0)
    nc.add_argument("--output", required=True, help="output stem")

    au = esub.add_parser("auc-sweep")
    _add_structure_args(au)
    au.add_argument("--reps", type=int, default=50)
    au.add_argument("--methods", nargs="+", choices=METHODS, default=["parsec-scalable", "pcs-hub"])
    au.add_argument("--fpr-cap", type=float, default=0.1)
    au.add_argument("--seed", type=int, default=0)
    au.add_argument("--output", required=True, help="output stem")

    ph = esub.add_parser("phase-transition")
    ph.add_argument("--n", type=int, default=10)
    ph.add_argument("--p", type=int, default=100)
    ph.add_argument("--reps", type=int, default=200)
    ph.add_argument("--rho-min", type=float, default=0.3)
    ph.add_argument("--rho-max", type=float, default=0.99)
    ph.add_argument("--points", type=int, default=50)
    ph.add_argument("--seed", type=int, default=0)
    ph.add_argument("--output", required=True, help="output stem")

    cd = esub.add_parser("coef-dist")
    _add_structure_args(cd)
    cd.add_argument("--reps", type=int, default=50)
    cd.add_argument("--methods", nargs="+", choices=METHODS, default=["parsec-scalable", "pcs-hub"])
    cd.add_argument("--seed", type=int, default=0)
    cd.add_argument("--output", required=True, help="output stem")

    es = sub.add_parser("estimate", help="estimate a precision matrix on screened edges")
    es.add_argument("--input", required=True)
    es.add_argument("--edges", required=True)
    es.add_argument("--method", choices=["concord", "gaussian"], default="concord")
    es.add_argument("--eps", type=float, default=1e-8)
    es.add_argument("--max-iter", type=int, default=10_000)
    es.add_argument("--mvp", action="store_true", help="also write minimum-variance portfolio weights")
    es.add_argument("--output", required=True, help="output stem for .omega.csv, .sigma.csv, .mvp.csv")
    es.add_argument("--delimiter", default=",")
    es.add_argument("--no-header", action="store_true")
    return ap


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_screen(args, threads: int) -> int:
    data = load_matrix(args.input, args.delimiter, not args.no_header)
    spec = ErrorControlSpec(args.control, alpha=args.alpha, k=args.k, rho=args.rho)
    res = screen(data.values, spec, args.method, threads, args.low_memory, args.symmetrize)
    write_edges(res.edges, args.output)
    summary = res.summary()
    summary.update({"input": str(args.input), "dropped_rows": data.dropped_rows, "symmetrize": args.symmetrize})
    _dump(summary, _sidecar(args.output))
    print(f"{len(res.edges)} edges at level {res.level:.6g} -> {args.output}")
    return 0


def cmd_simulate(args, threads: int) -> int:
    model = build_structure(_structure(args))
    if args.dist == "t":
        x = sample_mvt(model, args.nu, args.n, args.seed)
    else:
        x = sample_gaussian(model, args.n, args.seed)
    write_matrix(x, args.output, [f"x{j}" for j in range(args.p)])
    if args.edges_output:
        write_pairs(model.true_edges, args.edges_output)
    print(f"{args.n} x {args.p} sample, {len(model.true_edges)} true edges -> {args.output}")
    return 0


def cmd_experiment(args, threads: int) -> int:
    name = args.experiment
    if name == "null-calibration":
        k = ex.kfwer_k(args.kfwer_pct, args.p)
        specs = [ErrorControlSpec(c, alpha=args.alpha, k=k if c == "kfwer" else 0) for c in args.controls]
        rep = ex.null_calibration(args.n, args.p, args.reps, specs, args.seed, workers=threads)
    elif name == "auc-sweep":
        rep = ex.auc_sweep([_setting(args)], args.reps, tuple(args.methods), args.seed, args.fpr_cap, workers=threads)
    elif name == "phase-transition":
        grid = np.linspace(args.rho_min, args.rho_max, args.points)
        rep = ex.phase_transition_curve(args.n, args.p, args.reps, grid, args.seed, workers=threads)
    else:
        rep = ex.coef_distribution(_setting(args), args.reps, tuple(args.methods), args.seed, workers=threads)
    paths = rep.write_all(args.output)
    for a in rep.aggregates if len(rep.aggregates) <= 20 else []:
        print(a)
    print("wrote " + ", ".join(str(p) for p in paths))
    return 0


def cmd_estimate(args, threads: int) -> int:
    data = load_matrix(args.input, args.delimiter, not args.no_header)
    edges: EdgeSet = read_edges(args.edges)
    struct = EdgeStructure.from_pairs(data.p, edges.pairs())
    s = sample_covariance(data.values)
    fn = concord_estimate if args.method == "concord" else gaussian_estimate
    est = fn(s, struct, args.eps, args.max_iter)
    stem = Path(args.output)
    write_matrix(est.omega_hat, stem.with_suffix(".omega.csv"), data.column_names)
    write_matrix(est.sigma_hat, stem.with_suffix(".sigma.csv"), data.column_names)
    if args.mvp:
        w = mvp_weights(est.omega_hat)
        write_matrix(w[None, :], stem.with_suffix(".mvp.csv"), data.column_names)
    status = "converged" if est.converged else "did NOT converge"
    print(f"{args.method} {status} after {est.iterations} sweeps -> {stem}.*.csv")
    return 0 if est.converged else 1


COMMANDS = {"screen": cmd_screen, "simulate": cmd_simulate, "experiment": cmd_experiment, "estimate": cmd_estimate}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        threads = _threads(args.threads)
    except argparse.ArgumentTypeError as exc:
        ap.error(str(exc))
    try:
        return COMMANDS[args.command](args, threads)
    except (DataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
