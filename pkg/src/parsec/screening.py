"""End-to-end screening: data or U-scores in, error-controlled edges out."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import inference as inf
from .core import BLOCK_ROWS, RankOneWorkspace, iter_h_blocks, parsec_base, parsec_scalable, symmetrize
from .edges import EdgeSet
from .pcs_hub import pcs_hub_matrix
from .uscore import UScoreMatrix, uscores

METHODS = ("parsec-base", "parsec-scalable", "pcs-hub")


@dataclass(frozen=True)
class ScreenResult:
    method: str
    spec: inf.ErrorControlSpec
    n: int
    p: int
    level: float
    edges: EdgeSet
    achieved_error: float | None = None
    implied_k: int | None = None
    info: dict = field(default_factory=dict)

    def summary(self) -> dict:
        out = {
            "method": self.method,
            "control": self.spec.kind,
            "alpha": self.spec.alpha,
            "k": self.spec.k,
            "rho": self.spec.rho,
            "n": self.n,
            "p": self.p,
            "level": self.level,
            "discoveries": len(self.edges),
            "achieved_error": self.achieved_error,
            "implied_k": self.implied_k,
        }
        out.update(self.info)
        return out


def _fixed_level(spec: inf.ErrorControlSpec, n: int, p: int) -> tuple[float, float, int | None]:
    if spec.kind == "rho":
        rho = float(spec.rho)
        return rho, inf.achieved_error(rho, n, p, spec.k), inf.implied_k(rho, spec.alpha, n, p)
    level = inf.fwer_kfwer_level(spec, n, p)
    return level, inf.achieved_error(level, n, p, spec.k), None


def screen_matrix(h, spec: inf.ErrorControlSpec, n: int, method: str = "parsec-scalable") -> ScreenResult:
    """Apply ``spec`` to an already symmetric statistic matrix."""
    hv = np.asarray(getattr(h, "values", h), dtype=float)
    p = hv.shape[0]
    if method == "pcs-hub" and spec.is_fdr:
        raise ValueError(f"{spec.kind} control is not defined for pcs-hub; use fwer, kfwer or rho")
    if spec.kind in ("fdr-bh", "fdr-by"):
        level, edges = inf.fdr_screen(hv, spec, n)
        return ScreenResult(method, spec, n, p, level, edges)
    if spec.kind == "pfdr":
        level, edges = inf.pfdr_screen(hv, spec.alpha, n)
        return ScreenResult(method, spec, n, p, level, edges)
    level, err, k_imp = _fixed_level(spec, n, p)
    return ScreenResult(method, spec, n, p, level, inf.threshold_screen(hv, level, n), err, k_imp)


def statistic_matrix(u: UScoreMatrix, method: str, threads: int = 1, mode: str = "upper-triangle") -> np.ndarray:
    if method == "parsec-scalable":
        return symmetrize(parsec_scalable(u, threads), mode).values
    if method == "parsec-base":
        return symmetrize(parsec_base(u, threads), mode).values
    if method == "pcs-hub":
        return pcs_hub_matrix(u).values
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def screen(
    data,
    spec: inf.ErrorControlSpec,
    method: str = "parsec-scalable",
    threads: int = 1,
    low_memory: bool = False,
    mode: str = "upper-triangle",
) -> ScreenResult:
    """Screen a raw ``n x p`` data matrix (or precomputed U-scores).

    ``low_memory`` streams H in row blocks and never holds the ``p x p``
    matrix; it requires the scalable route and the upper-triangle rule and
    returns the same edges as the dense path.
    """
    u = data if isinstance(data, UScoreMatrix) else uscores(np.asarray(getattr(data, "values", data), dtype=float))
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "pcs-hub" and spec.is_fdr:
        raise ValueError(f"{spec.kind} control is not defined for pcs-hub; use fwer, kfwer or rho")
    if low_memory:
        if method != "parsec-scalable" or mode != "upper-triangle":
            raise ValueError("low-memory mode needs method parsec-scalable with upper-triangle symmetrization")
        return _screen_streaming(u, spec)
    return screen_matrix(statistic_matrix(u, method, threads, mode), spec, u.n, method)


def _screen_streaming(u: UScoreMatrix, spec: inf.ErrorControlSpec, block: int = BLOCK_ROWS) -> ScreenResult:
    n, p = u.n, u.values.shape[1]
    if spec.is_fdr:
        # every FDR level lies at or above P0^{-1}(alpha), so keep only those
        cut, strict = inf.solve_rho_for_p0(spec.alpha, n), True
        err = k_imp = None
    else:
        (cut, err, k_imp), strict = _fixed_level(spec, n, p), False
    ii, jj, vv = [], [], []
    for start, rows in iter_h_blocks(RankOneWorkspace(u), block):
        for r in range(rows.shape[0]):
            j = start + r
            tail = rows[r, j + 1 :]
            keep = np.flatnonzero(np.abs(tail) > cut if strict else np.abs(tail) >= cut)
            if keep.size:
                ii.append(np.full(keep.size, j))
                jj.append(keep + j + 1)
                vv.append(tail[keep])
    i = np.concatenate(ii) if ii else np.empty(0, dtype=np.int64)
    j = np.concatenate(jj) if jj else np.empty(0, dtype=np.int64)
    v = np.concatenate(vv) if vv else np.empty(0)
    level = cut
    if spec.is_fdr:
        a = np.abs(v)
        if spec.kind == "pfdr":
            res = inf.pfdr_level(a, n, p, spec.alpha)
        else:
            res = inf.fdr_level(a, n, p, spec.alpha, "bh" if spec.kind == "fdr-bh" else "by")
        level = res.level
        sel = a > level
        i, j, v = i[sel], j[sel], v[sel]
    edges = EdgeSet(i, j, v, inf.pvalue(v, n))
    return ScreenResult("parsec-scalable", spec, n, p, level, edges, err, k_imp, {"low_memory": True})
