"""Null distribution of H entries and multiple-testing error control.

Under a diagonal covariance each off-diagonal ``|H_jk|`` exceeds ``rho``
with probability equal to the spherical cap probability

    P0(rho, n) = a_n * int_rho^1 (1 - u^2)^((n-4)/2) du,

and the number of upper-triangle exceedances is approximately Poisson with
rate ``eta = p(p-1)/2 * P0(rho, n)``.  Everything here is built from those
two facts.

``P0`` is evaluated through the identity
``P0(rho, n) = I_{1-rho^2}((n-2)/2, 1/2)`` (regularized incomplete beta),
which follows from substituting ``t = u^2`` in the integral; the constant
``a_n`` is exactly the reciprocal of the resulting beta function.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .edges import EdgeSet

KINDS = ("fwer", "kfwer", "fdr-bh", "fdr-by", "pfdr", "rho")


@dataclass(frozen=True)
class ErrorControlSpec:
    """Which error metric to control and at what level.

    ``kind`` is one of ``fwer``, ``kfwer``, ``fdr-bh``, ``fdr-by``, ``pfdr``
    or ``rho`` (a raw, user-chosen screening level).
    """

    kind: str
    alpha: float = 0.05
    k: int = 0
    rho: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown error control {self.kind!r}; expected one of {KINDS}")
        if self.kind == "rho":
            if self.rho is None or not 0.0 < self.rho < 1.0:
                raise ValueError("raw level rho must lie in (0, 1)")
        elif not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if self.kind == "fwer" and self.k != 0:
            raise ValueError("FWER uses k = 0; use kind='kfwer' for k > 0")

    @property
    def is_fdr(self) -> bool:
        return self.kind in ("fdr-bh", "fdr-by", "pfdr")


def cap_constant(n: int) -> float:
    """``a_n = 2 Gamma((n-1)/2) / (sqrt(pi) Gamma((n-2)/2))``."""
    _check_n(n)
    return 2.0 * math.exp(special.gammaln((n - 1) / 2) - special.gammaln((n - 2) / 2)) / math.sqrt(math.pi)


def _check_n(n: int) -> None:
    if n < 3:
        raise ValueError(f"spherical cap probability requires n >= 3, got n={n}")


def spherical_cap_p0(rho, n: int):
    """Probability that ``|<U, v>| > rho`` for ``U`` uniform on ``S_{n-2}``.

    Accepts scalars or arrays of levels in ``[0, 1]``.
    """
    _check_n(n)
    r = np.asarray(rho, dtype=float)
    if np.any(r < 0) or np.any(r > 1 + 1e-10):
        raise ValueError("rho must lie in [0, 1]")
    r = np.minimum(r, 1.0)
    x = (1.0 - r) * (1.0 + r)
    out = special.betainc((n - 2) / 2.0, 0.5, x)
    return float(out) if out.ndim == 0 else out


def pvalue(h, n: int):
    """Exact null p-value ``P0(|h|, n)`` of a scaled partial correlation."""
    a = np.abs(np.asarray(h, dtype=float))
    if np.any(a > 1 + 1e-10):
        raise ValueError("statistic outside [-1, 1]")
    return spherical_cap_p0(np.minimum(a, 1.0), n)


def solve_rho_for_p0(target: float, n: int) -> float:
    """Level ``rho`` with ``P0(rho, n) = target``, for ``target`` in (0, 1]."""
    _check_n(n)
    if not 0.0 < target <= 1.0:
        raise ValueError(f"target probability must lie in (0, 1], got {target}")
    if target == 1.0:
        return 0.0
    a = (n - 2) / 2.0
    x = float(special.betaincinv(a, 0.5, target))
    rho = math.sqrt(max(0.0, 1.0 - x))
    if abs(spherical_cap_p0(rho, n) - target) > 1e-12 * max(1.0, target) or not 0 <= rho <= 1:
        rho = optimize.brentq(
            lambda r: spherical_cap_p0(r, n) - target, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps
        )
    return rho


def poisson_tail(k: int, eta: float) -> float:
    """``P(N > k)`` for ``N ~ Poisson(eta)``."""
    if eta <= 0.0:
        return 0.0
    return float(special.gammainc(k + 1, eta))


def poisson_rate(rho, n: int, p: int):
    """Expected number of null upper-triangle exceedances at level ``rho``."""
    return 0.5 * p * (p - 1) * spherical_cap_p0(rho, n)


def critical_rate(alpha: float, k: int) -> float:
    """Largest ``eta`` with ``P(Poisson(eta) > k) <= alpha``."""
    if k == 0:
        return -math.log1p(-alpha)
    eta = float(special.gammaincinv(k + 1, alpha))
    # gammaincinv is accurate to a few ulps; nudge onto the admissible side
    while poisson_tail(k, eta) > alpha:
        eta = math.nextafter(eta, 0.0)
    return eta


def fwer_kfwer_level(spec: ErrorControlSpec, n: int, p: int) -> float:
    """Smallest level whose Poisson-approximated k-FWER is at most ``alpha``."""
    if spec.kind not in ("fwer", "kfwer"):
        raise ValueError(f"expected an FWER or k-FWER spec, got {spec.kind!r}")
    if p < 2:
        raise ValueError("need at least two features")
    eta = critical_rate(spec.alpha, spec.k)
    target = 2.0 * eta / (p * (p - 1.0))
    if target >= 1.0:
        warnings.warn(
            f"k={spec.k} tolerates more false discoveries than there are pairs; "
            "screening level set to 0",
            stacklevel=2,
        )
        return 0.0
    return solve_rho_for_p0(target, n)


def achieved_error(rho: float, n: int, p: int, k: int = 0) -> float:
    """Implied k-FWER ``P(Poisson(eta(rho)) > k)`` for a user-chosen level."""
    return poisson_tail(k, poisson_rate(rho, n, p))


def implied_k(rho: float, alpha: float, n: int, p: int) -> int:
    """Smallest ``k`` with ``P(Poisson(eta(rho)) > k) <= alpha``."""
    return _poisson_quantile(poisson_rate(rho, n, p), alpha)


def _poisson_quantile(eta: float, alpha: float) -> int:
    if eta <= 0.0 or poisson_tail(0, eta) <= alpha:
        return 0
    from scipy.stats import poisson

    k = int(poisson.isf(alpha, eta))
    while k > 0 and poisson_tail(k - 1, eta) <= alpha:
        k -= 1
    while poisson_tail(k, eta) > alpha:
        k += 1
    return k


def harmonic_number(m: int) -> float:
    if m < 1000:
        return float(np.sum(1.0 / np.arange(1, m + 1)))
    return float(special.digamma(m + 1.0) + np.euler_gamma)


# ---------------------------------------------------------------------------
# FDR / pFDR iterative level search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FdrResult:
    level: float
    discoveries: int
    iterations: int


def _count_above(sorted_abs: np.ndarray, rho: float) -> int:
    return int(sorted_abs.size - np.searchsorted(sorted_abs, rho, side="right"))


def fdr_level(abs_values, n: int, p: int, alpha: float, method: str = "bh") -> FdrResult:
    """Iterative BH/BY rejection level over upper-triangle ``|H|`` values.

    ``abs_values`` may be a pre-screened subset as long as it contains every
    value above ``P0^{-1}(alpha)``; totals always refer to ``p(p-1)/2`` tests.
    Discoveries are the values strictly above the returned level.
    """
    total = p * (p - 1) // 2
    if method == "bh":
        m0 = float(total)
    elif method == "by":
        m0 = harmonic_number(total) * total
    else:
        raise ValueError(f"unknown FDR method {method!r}")
    vals = np.sort(np.asarray(abs_values, dtype=float).ravel())
    level = solve_rho_for_p0(alpha, n)
    m = _count_above(vals, level)
    it = 0
    while True:
        it += 1
        if m == 0:
            return FdrResult(1.0, 0, it)
        level = solve_rho_for_p0(m / m0 * alpha, n)
        m_next = _count_above(vals, level)
        if m_next == m:
            return FdrResult(level, m, it)
        m = m_next


def pfdr_level(abs_values, n: int, p: int, alpha: float) -> FdrResult:
    """Level controlling pFDR ~ FDR / P(N > 0) under the Poisson approximation.

    Runs the BH iteration with ``alpha`` replaced by
    ``alpha * (1 - exp(-eta(rho)))`` at the level ``rho`` currently in use.
    """
    total = p * (p - 1) // 2
    vals = np.sort(np.asarray(abs_values, dtype=float).ravel())
    level = solve_rho_for_p0(alpha, n)
    m = _count_above(vals, level)
    it = 0
    while True:
        it += 1
        if m == 0:
            return FdrResult(1.0, 0, it)
        adj = alpha * -math.expm1(-total * spherical_cap_p0(level, n))
        level = solve_rho_for_p0(m / total * adj, n)
        m_next = _count_above(vals, level)
        if m_next == m:
            return FdrResult(level, m, it)
        m = m_next


def upper_triangle(h) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    hv = np.asarray(getattr(h, "values", h), dtype=float)
    i, j = np.triu_indices(hv.shape[0], 1)
    return i, j, hv[i, j]


def _edges_above(h, n: int, level: float, strict: bool) -> EdgeSet:
    i, j, v = upper_triangle(h)
    keep = np.abs(v) > level if strict else np.abs(v) >= level
    return EdgeSet(i[keep], j[keep], v[keep], pvalue(v[keep], n))


def fdr_screen(h, spec: ErrorControlSpec, n: int) -> tuple[float, EdgeSet]:
    """BH or BY screening of a symmetric H via the iterative level search."""
    if spec.kind not in ("fdr-bh", "fdr-by"):
        raise ValueError(f"expected an FDR spec, got {spec.kind!r}")
    hv = np.asarray(getattr(h, "values", h), dtype=float)
    _, _, v = upper_triangle(hv)
    res = fdr_level(np.abs(v), n, hv.shape[0], spec.alpha, "bh" if spec.kind == "fdr-bh" else "by")
    return res.level, _edges_above(hv, n, res.level, strict=True)


def pfdr_screen(h, alpha: float, n: int) -> tuple[float, EdgeSet]:
    hv = np.asarray(getattr(h, "values", h), dtype=float)
    _, _, v = upper_triangle(hv)
    res = pfdr_level(np.abs(v), n, hv.shape[0], alpha)
    return res.level, _edges_above(hv, n, res.level, strict=True)


def threshold_screen(h, level: float, n: int) -> EdgeSet:
    """Upper-triangle pairs with ``|H_jk| >= level``."""
    return _edges_above(h, n, level, strict=False)
