"""Covariance structures and Gaussian / multivariate-t samplers.

Every structure is an "active" leading block of ``q`` features with the
remaining ``p - q`` features independent with unit variance, so models are
stored compactly and densified only on request.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

STRUCTURES = ("diagonal", "ar_block", "block", "star_connected", "star_disconnected")
EDGE_TOL = 1e-12


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class StructureSpec:
    kind: str
    p: int
    a: int = 0
    d: int = 1
    phi1: float = 0.7
    rho: float = 0.7
    k_stars: int = 0
    e: int = 0
    c: float = -0.35

    def __post_init__(self):
        if self.kind not in STRUCTURES:
            raise ValueError(f"unknown structure {self.kind!r}; expected one of {STRUCTURES}")
        if self.p < 1:
            raise ValueError("p must be positive")
        if self.kind in ("ar_block", "block") and not 0 <= self.a <= self.p:
            raise ValueError(f"block size a={self.a} must lie in [0, p]")
        if self.kind == "ar_block":
            if self.d < 1:
                raise ValueError("AR order d must be >= 1")
            if not abs(self.phi1) < 1:
                raise ValueError("|phi1| must be < 1")
        if self.kind == "block" and not abs(self.rho) < 1:
            raise ValueError("|rho| must be < 1")
        if self.kind.startswith("star"):
            if self.k_stars < 1 or self.e < 0:
                raise ValueError("stars need k_stars >= 1 and e >= 0")
            if self.k_stars * (self.e + 1) > self.p:
                raise ValueError("k_stars * (e + 1) exceeds p")

    @property
    def active(self) -> int:
        if self.kind == "diagonal":
            return 0
        if self.kind in ("ar_block", "block"):
            return self.a
        return self.k_stars * (self.e + 1)


@dataclass(frozen=True)
class CovarianceModel:
    """Covariance with a dense leading ``q x q`` block and identity elsewhere."""

    p: int
    sigma_block: np.ndarray
    omega_block: np.ndarray
    true_edges: frozenset = field(default_factory=frozenset)

    @property
    def q(self) -> int:
        return self.sigma_block.shape[0]

    def _dense(self, block: np.ndarray) -> np.ndarray:
        out = np.eye(self.p)
        out[: self.q, : self.q] = block
        return out

    @property
    def sigma(self) -> np.ndarray:
        return self._dense(self.sigma_block)

    @property
    def omega(self) -> np.ndarray:
        return self._dense(self.omega_block)

    def cholesky_block(self) -> np.ndarray:
        return np.linalg.cholesky(self.sigma_block) if self.q else np.zeros((0, 0))

    def edge_mask(self) -> np.ndarray:
        """Boolean ``p x p`` adjacency of ``true_edges`` (symmetric, no diagonal)."""
        m = np.zeros((self.p, self.p), dtype=bool)
        if self.true_edges:
            ij = np.array(sorted(self.true_edges))
            m[ij[:, 0], ij[:, 1]] = True
            m[ij[:, 1], ij[:, 0]] = True
        return m


def ar_coefficients(d: int, phi1: float) -> np.ndarray:
    if d == 1:
        return np.array([phi1])
    return np.concatenate([[phi1], np.full(d - 1, (1.0 - phi1) / (d - 1))])


def _is_stationary(phi: np.ndarray) -> bool:
    # roots of z^d - phi_1 z^{d-1} - ... - phi_d strictly inside the unit circle
    roots = np.roots(np.concatenate([[1.0], -phi]))
    return bool(np.all(np.abs(roots) < 1 - 1e-10))


def _stationary_acov(phi: np.ndarray, lags: int) -> np.ndarray:
    """Autocovariances ``gamma(0..lags-1)`` of a unit-innovation AR process."""
    d = phi.size
    # Yule-Walker: gamma(h) - sum_i phi_i gamma(|h-i|) = [h == 0], h = 0..d
    m = np.eye(d + 1)
    for h in range(d + 1):
        for i, ph in enumerate(phi, start=1):
            m[h, abs(h - i)] -= ph
    rhs = np.zeros(d + 1)
    rhs[0] = 1.0
    gam = list(np.linalg.solve(m, rhs))
    for h in range(d + 1, lags):
        gam.append(sum(ph * gam[h - i] for i, ph in enumerate(phi, start=1)))
    return np.asarray(gam[:lags])


def _ar_block(a: int, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if _is_stationary(phi):
        gam = _stationary_acov(phi, a)
        sigma = scipy.linalg.toeplitz(gam / gam[0])
        omega = np.linalg.inv(sigma)
        return sigma, 0.5 * (omega + omega.T)
    # non-stationary coefficients: the path started from zero,
    # X = L^{-1} eps with L unit lower-triangular and banded
    lmat = np.eye(a)
    for i, ph in enumerate(phi, start=1):
        if a > i:
            lmat -= np.diag(np.full(a - i, ph), -i)
    omega = lmat.T @ lmat
    sigma = np.linalg.inv(omega)
    sd = np.sqrt(np.diag(sigma))
    sigma = sigma / np.outer(sd, sd)
    sigma = 0.5 * (sigma + sigma.T)
    omega = omega * np.outer(sd, sd)
    return sigma, omega


def _star_omega(spec: StructureSpec) -> np.ndarray:
    q = spec.active
    omega = np.eye(q)
    hubs = [s * (spec.e + 1) for s in range(spec.k_stars)]
    for h in hubs:
        for leaf in range(h + 1, h + spec.e + 1):
            omega[h, leaf] = omega[leaf, h] = spec.c
    if spec.kind == "star_connected":
        # last leaf of each star links to the next hub; a hub-to-hub chain
        # is not positive definite for k_stars=10, e=4, c=-0.35
        for h1, h2 in zip(hubs[:-1], hubs[1:]):
            src = h1 + spec.e
            omega[src, h2] = omega[h2, src] = spec.c
    return omega


def _edges_from_omega(omega: np.ndarray) -> frozenset:
    i, j = np.nonzero(np.triu(np.abs(omega) > EDGE_TOL, 1))
    return frozenset(zip(i.tolist(), j.tolist()))


def build_structure(spec: StructureSpec) -> CovarianceModel:
    """Covariance, precision and true partial-correlation edges for ``spec``."""
    q = spec.active
    if spec.kind == "diagonal" or q == 0:
        return CovarianceModel(spec.p, np.zeros((0, 0)), np.zeros((0, 0)), frozenset())
    if spec.kind == "ar_block":
        sigma, omega = _ar_block(q, ar_coefficients(spec.d, spec.phi1))
    elif spec.kind == "block":
        sigma = np.full((q, q), spec.rho)
        np.fill_diagonal(sigma, 1.0)
        _check_pd(sigma, spec, "covariance")
        # inverse of (1 - r) I + r 11'
        r = spec.rho
        omega = (np.eye(q) - r / (1.0 + (q - 1) * r) * np.ones((q, q))) / (1.0 - r)
    else:
        omega = _star_omega(spec)
        _check_pd(omega, spec, "precision")
        sigma = np.linalg.inv(omega)
        sigma = 0.5 * (sigma + sigma.T)
    _check_pd(sigma, spec, "covariance")
    return CovarianceModel(spec.p, sigma, omega, _edges_from_omega(omega))


def _check_pd(m: np.ndarray, spec: StructureSpec, what: str) -> None:
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        lam = float(np.linalg.eigvalsh(m)[0])
        raise StructureError(
            f"{what} for {spec} is not positive definite (smallest eigenvalue {lam:.6g})"
        ) from None


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Independent stream for replication ``rep`` of a seeded experiment."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(rep)]))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _correlate(model: CovarianceModel, z: np.ndarray) -> np.ndarray:
    if model.q:
        z[:, : model.q] = z[:, : model.q] @ model.cholesky_block().T
    return z


def sample_gaussian(model: CovarianceModel, n: int, seed) -> np.ndarray:
    """``n`` rows ``N(0, Sigma)`` as Cholesky factor times standard normals."""
    rng = _rng(seed)
    return _correlate(model, rng.standard_normal((n, model.p)))


def sample_mvt(model: CovarianceModel, nu: float, n: int, seed) -> np.ndarray:
    """Multivariate t rows ``L z / sqrt(w / nu)`` with ``w ~ chi2(nu)``."""
    if not nu > 0:
        raise ValueError("degrees of freedom must be positive")
    rng = _rng(seed)
    x = _correlate(model, rng.standard_normal((n, model.p)))
    w = rng.chisquare(nu, size=n)
    return x / np.sqrt(w / nu)[:, None]
