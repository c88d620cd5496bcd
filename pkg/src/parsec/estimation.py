"""Precision-matrix estimation on a screened edge structure.

Two coordinate-descent estimators are provided:

* :func:`concord_estimate` minimizes the CONCORD pseudo-likelihood with
  the zero pattern fixed by the structure.
* :func:`gaussian_estimate` maximizes the Gaussian likelihood under the
  same zero pattern by the column-wise regression scheme of the graphical
  lasso with no penalty.

Features with no edges are removed before the descent and re-inserted
afterwards as independent coordinates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


class EstimationError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeStructure:
    """Symmetric boolean adjacency with a true diagonal."""

    adjacency: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        a = a.copy()
        np.fill_diagonal(a, True)
        object.__setattr__(self, "adjacency", a)

    @property
    def p(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_pairs(cls, p: int, pairs) -> "EdgeStructure":
        a = np.eye(p, dtype=bool)
        for i, j in pairs:
            if not (0 <= i < p and 0 <= j < p) or i == j:
                raise ValueError(f"invalid edge ({i}, {j}) for p={p}")
            a[i, j] = a[j, i] = True
        return cls(a)

    @classmethod
    def full(cls, p: int) -> "EdgeStructure":
        return cls(np.ones((p, p), dtype=bool))

    @classmethod
    def empty(cls, p: int) -> "EdgeStructure":
        return cls(np.eye(p, dtype=bool))

    def degree(self) -> np.ndarray:
        return self.adjacency.sum(axis=1) - 1


@dataclass(frozen=True)
class PrecisionEstimate:
    omega_hat: np.ndarray
    sigma_hat: np.ndarray
    converged: bool
    iterations: int


def _check_s(s, e: EdgeStructure) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (e.p, e.p):
        raise ValueError(f"covariance is {s.shape}, structure is {e.p} x {e.p}")
    if not np.allclose(s, s.T, rtol=0, atol=1e-10 * max(1.0, np.abs(s).max())):
        raise ValueError("covariance must be symmetric")
    if np.any(np.diag(s) <= 0):
        raise EstimationError("covariance diagonal must be strictly positive")
    return 0.5 * (s + s.T)


def _split(e: EdgeStructure) -> tuple[np.ndarray, np.ndarray]:
    deg = e.degree()
    return np.flatnonzero(deg > 0), np.flatnonzero(deg == 0)


def _inverse(m: np.ndarray) -> np.ndarray:
    try:
        out = np.linalg.inv(m)
    except np.linalg.LinAlgError:
        out = np.linalg.pinv(m)
    return 0.5 * (out + out.T)


def _concord_sweep(w: np.ndarray, s: np.ndarray, adj: np.ndarray) -> float:
    """One in-place pass over active edges (row-major) then the diagonal."""
    q = w.shape[0]
    biggest = 0.0
    for i in range(q):
        for j in np.flatnonzero(adj[i, i + 1 :]) + i + 1:
            # j' runs over row i, i' over column j; both include the diagonal
            num = w[i] @ s[:, j] - w[i, j] * s[j, j] + w[:, j] @ s[:, i] - w[i, j] * s[i, i]
            new = -num / (s[i, i] + s[j, j])
            biggest = max(biggest, abs(new - w[i, j]))
            w[i, j] = w[j, i] = new
    for i in range(q):
        b = w[i] @ s[:, i] - w[i, i] * s[i, i]
        new = (-b + math.sqrt(b * b + 4.0 * s[i, i])) / (2.0 * s[i, i])
        biggest = max(biggest, abs(new - w[i, i]))
        w[i, i] = new
    return biggest


def concord_residual(omega, s, e: EdgeStructure) -> float:
    """Largest change a further update would make at ``omega`` (fixed-point check)."""
    w = np.array(omega, dtype=float)
    s = np.asarray(s, dtype=float)
    keep, _ = _split(e)
    sub = np.ix_(keep, keep)
    worst = 0.0
    ws, ss, adj = w[sub], s[sub], e.adjacency[sub]
    q = ws.shape[0]
    for i in range(q):
        for j in range(q):
            if i != j and adj[i, j]:
                num = ws[i] @ ss[:, j] - ws[i, j] * ss[j, j] + ws[:, j] @ ss[:, i] - ws[i, j] * ss[i, i]
                worst = max(worst, abs(-num / (ss[i, i] + ss[j, j]) - ws[i, j]))
        b = ws[i] @ ss[:, i] - ws[i, i] * ss[i, i]
        worst = max(worst, abs((-b + math.sqrt(b * b + 4 * ss[i, i])) / (2 * ss[i, i]) - ws[i, i]))
    return worst


def concord_estimate(s, e: EdgeStructure, eps: float = 1e-8, max_iter: int = 10_000) -> PrecisionEstimate:
    """Pseudo-likelihood coordinate descent restricted to the edges of ``e``.

    Isolated features get ``1 / sqrt(s_ii)``, the diagonal update with an
    empty neighbourhood.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    s = _check_s(s, e)
    p = e.p
    keep, isolated = _split(e)
    sub = np.ix_(keep, keep)
    ss, adj = s[sub], e.adjacency[sub]
    w = np.diag(1.0 / np.diag(ss)) if keep.size else np.zeros((0, 0))
    converged, it = keep.size == 0, 0
    while not converged and it < max_iter:
        it += 1
        converged = _concord_sweep(w, ss, adj) <= eps
    if not converged:
        log.warning("CONCORD descent stopped after %d sweeps without converging", it)
    omega = np.zeros((p, p))
    omega[sub] = w
    omega[isolated, isolated] = 1.0 / np.sqrt(s[isolated, isolated])
    return PrecisionEstimate(omega, _inverse(omega), bool(converged), it)


def gaussian_estimate(s, e: EdgeStructure, eps: float = 1e-8, max_iter: int = 10_000) -> PrecisionEstimate:
    """Gaussian maximum likelihood with the zero pattern of ``e``.

    Each step regresses one column of ``W`` on its structural neighbours:
    solve ``W11[A, A] beta_A = s12[A]``, set ``w12 = W11 beta`` and stop
    when the summed absolute change of ``W`` over a sweep is at most ``eps``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    s = _check_s(s, e)
    p = e.p
    keep, isolated = _split(e)
    sub = np.ix_(keep, keep)
    ss, adj = s[sub], e.adjacency[sub]
    q = keep.size
    w = ss.copy()
    betas = [np.zeros(q - 1) for _ in range(q)]
    converged, it = q == 0, 0
    while not converged and it < max_iter:
        it += 1
        change = 0.0
        for j in range(q):
            rest = np.r_[0:j, j + 1 : q]
            act = np.flatnonzero(adj[j, rest])
            w11 = w[np.ix_(rest, rest)]
            beta = np.zeros(q - 1)
            try:
                beta[act] = np.linalg.solve(w11[np.ix_(act, act)], ss[rest[act], j])
            except np.linalg.LinAlgError:
                raise EstimationError(f"singular neighbourhood system for feature {keep[j]}") from None
            w12 = w11 @ beta
            change += 2.0 * np.abs(w12 - w[rest, j]).sum()
            w[rest, j] = w12
            w[j, rest] = w12
            betas[j] = beta
        converged = change <= eps
    if not converged:
        log.warning("Gaussian descent stopped after %d sweeps without converging", it)
    theta = np.zeros((q, q))
    for j in range(q):
        rest = np.r_[0:j, j + 1 : q]
        t22 = 1.0 / (ss[j, j] - w[rest, j] @ betas[j])
        theta[j, j] = t22
        theta[rest, j] = -betas[j] * t22
    theta = 0.5 * (theta + theta.T)
    theta[~adj] = 0.0
    omega = np.zeros((p, p))
    sigma = np.zeros((p, p))
    omega[sub] = theta
    sigma[sub] = 0.5 * (w + w.T)
    omega[isolated, isolated] = 1.0 / s[isolated, isolated]
    sigma[isolated, isolated] = s[isolated, isolated]
    return PrecisionEstimate(omega, sigma, bool(converged), it)


def mvp_weights(sigma_inv) -> np.ndarray:
    """Minimum-variance portfolio ``Sigma^{-1} 1 / (1' Sigma^{-1} 1)``."""
    m = np.asarray(sigma_inv, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("precision matrix must be square")
    raw = m.sum(axis=1)
    total = raw.sum()
    if not total > 0:
        raise EstimationError(f"1' Sigma^-1 1 = {total:.6g} is not positive")
    w = raw / total
    return w / w.sum()


def sample_covariance(x) -> np.ndarray:
    """Unbiased sample covariance of the columns of ``x``."""
    x = np.asarray(x, dtype=float)
    return np.atleast_2d(np.cov(x, rowvar=False))
