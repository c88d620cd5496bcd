"""Baseline: standardized Moore-Penrose partial correlations (PCS-Hub edges).

``P = Y'Y`` with Y-scores ``Y = (U U')^{-1} U D^{-1/2}``, which is the
correlation-scaled generalized inverse of the sample correlation matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RCOND_MIN, DegenerateInputError, _as_array, _rcond


@dataclass(frozen=True)
class HubPCorMatrix:
    values: np.ndarray

    @property
    def p(self) -> int:
        return self.values.shape[0]


def yscores(u) -> np.ndarray:
    """Unit-norm Y-score columns.

    When ``p < n - 1`` the matrix ``U U'`` is rank deficient and the
    pseudo-inverse of ``U'`` is used instead; it coincides with
    ``(U U')^{-1} U`` whenever the latter exists.
    """
    uv = _as_array(u)
    if uv.shape[1] >= uv.shape[0]:
        m = uv @ uv.T
        if _rcond(m) < RCOND_MIN:
            raise DegenerateInputError("U U' is numerically singular")
        y = np.linalg.solve(m, uv)
    else:
        y = np.linalg.pinv(uv.T)
    norms = np.sqrt(np.einsum("ij,ij->j", y, y))
    return y / norms


def pcs_hub_matrix(u) -> HubPCorMatrix:
    y = yscores(u)
    pm = y.T @ y
    pm = 0.5 * (pm + pm.T)
    np.fill_diagonal(pm, 1.0)
    return HubPCorMatrix(pm)
