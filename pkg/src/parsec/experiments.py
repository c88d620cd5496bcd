"""Simulation experiments: null calibration, phase transition, power, coefficients.

Every replication draws from its own stream derived from ``(seed, keys)``,
so results do not depend on execution order or on the worker count.
Reports keep all per-replication records; aggregates are recomputable
from them.  Timing is kept apart from the records so that the CSV and JSON
outputs are byte-identical across runs with the same seed.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import inference as inf
from .core import parsec_scalable
from .metrics import auc_from_scores, pair_scores
from .screening import screen_matrix, statistic_matrix
from .simgen import StructureSpec, build_structure, sample_gaussian, sample_mvt
from .uscore import uscores

FWER_FAMILY = ("fwer", "kfwer", "rho")


@dataclass
class ExperimentReport:
    name: str
    setting: dict
    records: list[dict]
    aggregates: list[dict]
    timing: dict = field(default_factory=dict)

    def write_csv(self, path) -> None:
        _write_rows(self.records, path)

    def write_aggregates_csv(self, path) -> None:
        _write_rows(self.aggregates, path)

    def summary(self) -> dict:
        return {"name": self.name, "setting": self.setting, "aggregates": self.aggregates}

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(_plain(self.summary()), indent=2, sort_keys=True) + "\n")

    def write_timing(self, path) -> None:
        Path(path).write_text(json.dumps(_plain(self.timing), indent=2, sort_keys=True) + "\n")

    def write_all(self, stem) -> list[Path]:
        """``stem.csv``, ``stem.summary.json`` and ``stem.timing.json``."""
        stem = Path(stem)
        stem.parent.mkdir(parents=True, exist_ok=True)
        paths = [stem.with_suffix(".csv"), stem.with_suffix(".summary.json"), stem.with_suffix(".timing.json")]
        self.write_csv(paths[0])
        self.write_json(paths[1])
        self.write_timing(paths[2])
        return paths


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _write_rows(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        if not rows:
            return
        w = csv.writer(fh, lineterminator="\n")
        keys = list(rows[0])
        w.writerow(keys)
        for r in rows:
            w.writerow([_cell(r.get(k)) for k in keys])


def rep_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, keys)]))


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _median(xs) -> float | None:
    xs = sorted(x for x in xs if x is not None)
    return float(np.median(xs)) if xs else None


def kfwer_k(pct: float, p: int) -> int:
    """``k`` as a fraction of the ``p(p-1)/2`` pairs, rounded down."""
    return int(math.floor(pct * p * (p - 1) / 2 + 1e-9))


# ---------------------------------------------------------------------------
# null calibration
# ---------------------------------------------------------------------------


def null_calibration(
    n: int,
    p: int,
    reps: int,
    specs: list[inf.ErrorControlSpec],
    seed: int,
    methods: tuple[str, ...] = ("parsec-scalable", "pcs-hub"),
    workers: int = 1,
) -> ExperimentReport:
    """Error rates under ``Sigma = I``, where every discovery is false.

    PCS-Hub is only scored on the FWER family.
    """

    def one(rep):
        x = rep_rng(seed, rep).standard_normal((n, p))
        u = uscores(x)
        out = []
        for method in methods:
            mine = [s for s in specs if method != "pcs-hub" or not s.is_fdr]
            if not mine:
                continue
            h = statistic_matrix(u, method)
            for s in mine:
                r = screen_matrix(h, s, n, method)
                d = len(r.edges)
                out.append(
                    {
                        "rep": rep,
                        "method": method,
                        "control": s.kind,
                        "alpha": s.alpha,
                        "k": s.k,
                        "level": r.level,
                        "discoveries": d,
                        "exceeds_k": int(d > s.k),
                        "fdp": 1.0 if d else 0.0,
                    }
                )
        return out

    t0 = time.perf_counter()
    records = [r for chunk in _map(one, range(reps), workers) for r in chunk]
    aggs = []
    groups: dict[tuple, list[dict]] = {}
    for r in records:
        groups.setdefault((r["method"], r["control"], r["alpha"], r["k"]), []).append(r)
    for (method, control, alpha, k), rs in groups.items():
        aggs.append(
            {
                "method": method,
                "control": control,
                "alpha": alpha,
                "k": k,
                "reps": len(rs),
                "exceed_fraction": sum(r["exceeds_k"] for r in rs) / len(rs),
                "mean_fdp": sum(r["fdp"] for r in rs) / len(rs),
                "mean_discoveries": sum(r["discoveries"] for r in rs) / len(rs),
            }
        )
    setting = {"n": n, "p": p, "reps": reps, "seed": seed, "specs": [asdict(s) for s in specs], "methods": list(methods)}
    return ExperimentReport("null-calibration", setting, records, aggs, {"seconds": time.perf_counter() - t0})


def calibration_rate(report: ExperimentReport, method: str, control: str) -> float:
    """Exceedance fraction (FWER family) or mean FDP (FDR family) of one spec."""
    for a in report.aggregates:
        if a["method"] == method and a["control"] == control:
            return a["exceed_fraction"] if control in FWER_FAMILY else a["mean_fdp"]
    raise KeyError((method, control))


# ---------------------------------------------------------------------------
# phase transition
# ---------------------------------------------------------------------------


def null_feature_curve(rho_grid, n: int, p: int) -> np.ndarray:
    """Independence approximation ``1 - (1 - P0(rho, n))^(p-1)``."""
    p0 = np.asarray(inf.spherical_cap_p0(np.asarray(rho_grid, dtype=float), n))
    return -np.expm1((p - 1) * np.log1p(-np.minimum(p0, 1.0)))


def phase_transition_curve(n: int, p: int, reps: int, rho_grid, seed: int, workers: int = 1) -> ExperimentReport:
    """Fraction of null features with at least one ``|H_jk| >= rho``.

    Feature ``j`` is judged on its own row of H (its regression on all the
    others) before any symmetrization, so the outcome does not depend on
    column order.
    """
    grid = np.asarray(rho_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0) or grid[0] <= 0 or grid[-1] >= 1:
        raise ValueError("rho grid must be strictly increasing inside (0, 1)")

    def one(rep):
        x = rep_rng(seed, rep).standard_normal((n, p))
        h = np.abs(parsec_scalable(uscores(x)).values)
        np.fill_diagonal(h, 0.0)
        top = np.sort(h.max(axis=1))
        frac = (p - np.searchsorted(top, grid, side="left")) / p
        return [{"rep": rep, "rho": float(r), "fraction": float(f)} for r, f in zip(grid, frac)]

    t0 = time.perf_counter()
    records = [r for chunk in _map(one, range(reps), workers) for r in chunk]
    theory = null_feature_curve(grid, n, p)
    aggs = []
    for idx, r in enumerate(grid):
        med = _median(rec["fraction"] for rec in records if rec["rho"] == float(r))
        aggs.append({"rho": float(r), "empirical_median": med, "approximation": float(theory[idx]), "gap": abs(med - float(theory[idx]))})
    setting = {"n": n, "p": p, "reps": reps, "seed": seed, "grid_points": int(grid.size)}
    return ExperimentReport("phase-transition", setting, records, aggs, {"seconds": time.perf_counter() - t0})


def max_gap(report: ExperimentReport) -> float:
    return max(a["gap"] for a in report.aggregates)


# ---------------------------------------------------------------------------
# power
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Setting:
    structure: StructureSpec
    n: int
    dist: str = "gaussian"
    nu: float | None = None

    def label(self) -> str:
        s = self.structure
        tag = {"ar_block": f"ar{s.d}-a{s.a}", "block": f"block-a{s.a}"}.get(s.kind, s.kind)
        dist = self.dist if self.dist == "gaussian" else f"t{self.nu:g}"
        return f"{tag}-n{self.n}-p{s.p}-{dist}"


def draw(setting: Setting, model, rng) -> np.ndarray:
    if setting.dist == "gaussian":
        return sample_gaussian(model, setting.n, rng)
    if setting.dist == "t":
        return sample_mvt(model, setting.nu, setting.n, rng)
    raise ValueError(f"unknown distribution {setting.dist!r}")


def auc_sweep(
    settings: list[Setting],
    reps: int,
    methods: tuple[str, ...],
    seed: int,
    fpr_cap: float = 0.1,
    workers: int = 1,
) -> ExperimentReport:
    """Median full and FPR-capped AUC per (setting, method), with wall time."""
    models = [build_structure(s.structure) for s in settings]
    timing: dict[str, list[float]] = {}

    def one(job):
        si, rep = job
        st, model = settings[si], models[si]
        x = draw(st, model, rep_rng(seed, si, rep))
        u = uscores(x)
        out = []
        for method in methods:
            t = time.perf_counter()
            h = statistic_matrix(u, method)
            secs = time.perf_counter() - t
            timing.setdefault(f"{st.label()}|{method}", []).append(secs)
            rec = {"setting": st.label(), "rep": rep, "method": method, "auc": None, "auc_capped": None}
            if model.true_edges:
                s, y = pair_scores(h, model.edge_mask())
                rec["auc"] = auc_from_scores(s, y)
                rec["auc_capped"] = auc_from_scores(s, y, fpr_cap)
            out.append(rec)
        return out

    jobs = [(si, rep) for si in range(len(settings)) for rep in range(reps)]
    records = [r for chunk in _map(one, jobs, workers) for r in chunk]
    aggs = []
    for st in settings:
        for method in methods:
            rs = [r for r in records if r["setting"] == st.label() and r["method"] == method]
            med = _median(r["auc"] for r in rs)
            aggs.append(
                {
                    "setting": st.label(),
                    "method": method,
                    "reps": len(rs),
                    "median_auc": med,
                    "median_auc_capped": _median(r["auc_capped"] for r in rs),
                    "degenerate": med is None,
                }
            )
    setting = {
        "settings": [{**asdict(s.structure), "n": s.n, "dist": s.dist, "nu": s.nu} for s in settings],
        "reps": reps,
        "seed": seed,
        "methods": list(methods),
        "fpr_cap": fpr_cap,
    }
    med_time = {k: _median(v) for k, v in sorted(timing.items())}
    return ExperimentReport("auc-sweep", setting, records, aggs, {"median_seconds": med_time})


def median_auc(report: ExperimentReport, method: str, setting: str | None = None, capped: bool = False) -> float | None:
    for a in report.aggregates:
        if a["method"] == method and (setting is None or a["setting"] == setting):
            return a["median_auc_capped" if capped else "median_auc"]
    raise KeyError(method)


# ---------------------------------------------------------------------------
# coefficient distribution
# ---------------------------------------------------------------------------


def coef_distribution(
    setting: Setting, reps: int, methods: tuple[str, ...], seed: int, workers: int = 1
) -> ExperimentReport:
    """Pooled upper-triangle values split into true-edge and null groups."""
    model = build_structure(setting.structure)
    mask = model.edge_mask()
    iu = np.triu_indices(model.p, 1)
    is_edge = mask[iu]

    def one(rep):
        u = uscores(draw(setting, model, rep_rng(seed, rep)))
        out = []
        for method in methods:
            vals = statistic_matrix(u, method)[iu]
            for v, e in zip(vals.tolist(), is_edge.tolist()):
                out.append({"rep": rep, "method": method, "group": "edge" if e else "null", "value": v})
        return out

    t0 = time.perf_counter()
    records = [r for chunk in _map(one, range(reps), workers) for r in chunk]
    aggs = []
    for method in methods:
        for group in ("edge", "null"):
            vals = [abs(r["value"]) for r in records if r["method"] == method and r["group"] == group]
            if vals:
                aggs.append({"method": method, "group": group, "count": len(vals), "median_abs": _median(vals)})
    setting_d = {**asdict(setting.structure), "n": setting.n, "dist": setting.dist, "nu": setting.nu, "reps": reps, "seed": seed, "methods": list(methods)}
    return ExperimentReport("coef-dist", setting_d, records, aggs, {"seconds": time.perf_counter() - t0})


def separation(report: ExperimentReport, method: str) -> float:
    """Median ``|value|`` on true edges minus the median on null pairs."""
    med = {a["group"]: a["median_abs"] for a in report.aggregates if a["method"] == method}
    return med["edge"] - med["null"]
