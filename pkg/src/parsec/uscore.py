"""Standardization and U-score projection.

Columns of an ``n x p`` data matrix are centred and scaled to unit norm
(Z-scores), then rotated onto the ``n - 1`` dimensional hyperplane
orthogonal to the all-ones vector.  The resulting U-scores live on the
unit sphere ``S_{n-2}`` and their inner products are exactly the sample
Pearson correlations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ZScoreMatrix:
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class OrthonormalBasis:
    """``n x (n-1)`` matrix whose columns are orthonormal and orthogonal to 1."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class UScoreMatrix:
    values: np.ndarray
    n: int

    @property
    def p(self) -> int:
        return self.values.shape[1]


def standardize(x) -> ZScoreMatrix:
    """Centre each column and scale it to unit Euclidean norm.

    This equals ``(X_j - mean_j) / sqrt(S_jj (n - 1))`` with ``S`` the
    sample covariance using the ``n - 1`` divisor.

    Parameters
    ----------
    x : DataMatrix or array_like, shape (n, p)

    Raises
    ------
    ValueError
        If a column has zero sample variance.
    """
    values = np.asarray(getattr(x, "values", x), dtype=float)
    if values.ndim != 2:
        raise ValueError("data matrix must be two-dimensional")
    centred = values - values.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", centred, centred))
    bad = np.flatnonzero(norms == 0.0)
    if bad.size:
        raise ValueError(f"column {int(bad[0])} has zero variance")
    return ZScoreMatrix(centred / norms)


def build_basis(n: int) -> OrthonormalBasis:
    """Helmert basis of the hyperplane ``{u : 1'u = 0}`` in ``R^n``.

    Column ``k`` (``k = 1..n-1``) is ``(1, ..., 1, -k, 0, ..., 0) / sqrt(k(k+1))``
    with ``k`` leading ones.
    """
    if n < 2:
        raise ValueError(f"basis requires n >= 2, got n={n}")
    t = np.zeros((n, n - 1))
    for k in range(1, n):
        scale = 1.0 / np.sqrt(k * (k + 1.0))
        t[:k, k - 1] = scale
        t[k, k - 1] = -k * scale
    return OrthonormalBasis(t)


def compute_uscores(z: ZScoreMatrix, basis: OrthonormalBasis) -> UScoreMatrix:
    zv = np.asarray(getattr(z, "values", z), dtype=float)
    tv = np.asarray(getattr(basis, "values", basis), dtype=float)
    if tv.shape[0] != zv.shape[0] or tv.shape[1] != zv.shape[0] - 1:
        raise ValueError(
            f"basis of shape {tv.shape} does not match data with n={zv.shape[0]}"
        )
    return UScoreMatrix(tv.T @ zv, n=zv.shape[0])


def uscores(x, basis: OrthonormalBasis | None = None) -> UScoreMatrix:
    """Data matrix straight to U-scores, using the Helmert basis by default."""
    z = standardize(x)
    if basis is None:
        basis = build_basis(z.n)
    return compute_uscores(z, basis)
