"""Scaled partial-correlation matrix H from U-scores.

Row ``j`` of H holds the rescaled coefficients from regressing ``U_j`` on
all other U-scores.  Two routes are provided:

* :func:`parsec_base` solves one ``(n-1) x (n-1)`` system per row.
* :func:`parsec_scalable` inverts ``U U'`` once and obtains every
  leave-one-out inverse through a Sherman-Morrison rank-one update, so
  each entry costs O(1) once ``B = U'AU`` and ``G = F'F`` are available.

Rows are computed in fixed-size blocks.  The block partition never depends
on the thread count, which keeps the output bitwise reproducible.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import scipy.linalg
from threadpoolctl import threadpool_limits

from .uscore import UScoreMatrix

RCOND_MIN = 1e-12
BLOCK_ROWS = 256
SYMMETRIZE_MODES = ("upper-triangle", "min-abs", "max-abs", "average")


class DegenerateInputError(ValueError):
    """Raised when a leave-one-out system is singular; ``index`` names the feature."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class ScaledPCorMatrix:
    values: np.ndarray

    @property
    def p(self) -> int:
        return self.values.shape[0]


def _as_array(u) -> np.ndarray:
    return np.asarray(getattr(u, "values", u), dtype=float)


def _rcond(m: np.ndarray) -> float:
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


class RankOneWorkspace:
    """Shared, read-only quantities for the rank-one update route.

    ``A = (U U')^{-1}``, ``F = A U`` and the diagonals of ``B = U'AU`` and
    ``G = F'F``.  Dense ``B`` is only formed on request.
    """

    def __init__(self, u):
        uv = _as_array(u)
        m = uv @ uv.T
        if _rcond(m) < RCOND_MIN:
            raise DegenerateInputError("U U' is numerically singular")
        chol = scipy.linalg.cho_factor(m, lower=True)
        a = scipy.linalg.cho_solve(chol, np.eye(m.shape[0]))
        self.A = 0.5 * (a + a.T)
        self.U = uv
        self.F = self.A @ uv
        self.b_diag = np.einsum("ij,ij->j", uv, self.F)
        self.g_diag = np.einsum("ij,ij->j", self.F, self.F)
        bad = np.flatnonzero(self.b_diag >= 1.0 - RCOND_MIN)
        if bad.size:
            j = int(bad[0])
            raise DegenerateInputError(
                f"feature {j} is not spanned by the others (B_jj={self.b_diag[j]:.17g})",
                index=j,
            )

    @property
    def p(self) -> int:
        return self.U.shape[1]

    @property
    def B(self) -> np.ndarray:
        return self.U.T @ self.F

    def h_rows(self, start: int, stop: int) -> np.ndarray:
        """Rows ``start:stop`` of H.

        With ``c = B_jk / (1 - B_jj)`` the entry is
        ``H_jk = c / ||F_k + c F_j||`` and the squared norm is expanded as
        ``G_kk + 2 c G_jk + c^2 G_jj``.
        """
        rows = slice(start, stop)
        b = self.U[:, rows].T @ self.F
        g = self.F[:, rows].T @ self.F
        c = b / (1.0 - self.b_diag[rows])[:, None]
        norm2 = self.g_diag[None, :] + 2.0 * c * g + c * c * self.g_diag[rows, None]
        np.maximum(norm2, np.finfo(float).tiny, out=norm2)
        h = c / np.sqrt(norm2)
        idx = np.arange(stop - start)
        h[idx, start + idx] = 1.0
        return h


def _blocks(p: int, block: int) -> list[tuple[int, int]]:
    return [(s, min(s + block, p)) for s in range(0, p, block)]


def _run_blocks(fn, p: int, threads: int, block: int) -> None:
    spans = _blocks(p, block)
    with threadpool_limits(limits=1, user_api="blas"):
        if threads <= 1 or len(spans) == 1:
            for s, e in spans:
                fn(s, e)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(lambda se: fn(*se), spans))


def parsec_scalable(u, threads: int = 1, block: int = BLOCK_ROWS) -> ScaledPCorMatrix:
    """H through rank-one updates of ``(U U')^{-1}``; O(n p^2) work."""
    ws = RankOneWorkspace(u)
    p = ws.p
    out = np.empty((p, p))

    def fill(s, e):
        out[s:e] = ws.h_rows(s, e)

    _run_blocks(fill, p, threads, block)
    return ScaledPCorMatrix(out)


def iter_h_blocks(u, block: int = BLOCK_ROWS) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(start, rows)`` blocks of H without holding the full matrix."""
    ws = u if isinstance(u, RankOneWorkspace) else RankOneWorkspace(u)
    with threadpool_limits(limits=1, user_api="blas"):
        for s, e in _blocks(ws.p, block):
            yield s, ws.h_rows(s, e)


def _base_row(uv: np.ndarray, j: int) -> np.ndarray:
    others = np.delete(uv, j, axis=1)
    m = others @ others.T
    if _rcond(m) < RCOND_MIN:
        raise DegenerateInputError(
            f"leave-one-out system for feature {j} is numerically singular", index=j
        )
    c = np.linalg.solve(m, others)
    norms = np.sqrt(np.einsum("ij,ij->j", c, c))
    row = np.empty(uv.shape[1])
    row[j] = 1.0
    row[np.arange(uv.shape[1]) != j] = (c.T @ uv[:, j]) / norms
    return row


def parsec_base(u, threads: int = 1) -> ScaledPCorMatrix:
    """H by direct evaluation: one leave-one-out solve per row.

    Row ``j`` is ``(Ut^{-j})' U_j`` where ``Ut^{-j}`` is the column-normalized
    ``(U^{-j} U^{-j}')^{-1} U^{-j}``.
    """
    uv = _as_array(u)
    p = uv.shape[1]
    out = np.empty((p, p))

    def fill(s, e):
        for j in range(s, e):
            out[j] = _base_row(uv, j)

    _run_blocks(fill, p, threads, BLOCK_ROWS)
    return ScaledPCorMatrix(out)


def symmetrize(h, mode: str = "upper-triangle") -> ScaledPCorMatrix:
    """Reconcile ``H_jk`` and ``H_kj`` into one symmetric matrix."""
    hv = _as_array(h)
    if mode == "upper-triangle":
        upper = np.triu(hv, 1)
        out = upper + upper.T
    elif mode == "average":
        out = 0.5 * (hv + hv.T)
    elif mode in ("min-abs", "max-abs"):
        ht = hv.T
        pick = np.abs(hv) <= np.abs(ht)
        if mode == "max-abs":
            pick = ~pick
        out = np.where(pick, hv, ht)
        # ties resolve to the same element from both sides
        out = np.triu(out, 1)
        out = out + out.T
    else:
        raise ValueError(f"unknown symmetrization mode {mode!r}")
    np.fill_diagonal(out, np.diag(hv))
    return ScaledPCorMatrix(out)
