from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parsec.uscore import build_basis, compute_uscores, standardize, uscores


def test_basis_is_orthonormal_and_orthogonal_to_ones():
    for n in (2, 3, 7, 30):
        t = build_basis(n).values
        assert t.shape == (n, n - 1)
        np.testing.assert_allclose(t.T @ t, np.eye(n - 1), atol=1e-14)
        np.testing.assert_allclose(t.sum(axis=0), 0.0, atol=1e-14)


def test_basis_rejects_tiny_n():
    with pytest.raises(ValueError):
        build_basis(1)


def test_inner_products_are_pearson_correlations(rng):
    x = rng.standard_normal((12, 9)) * rng.uniform(0.1, 10, 9) + rng.normal(0, 5, 9)
    u = uscores(x).values
    np.testing.assert_allclose(u.T @ u, np.corrcoef(x, rowvar=False), atol=1e-13)
    np.testing.assert_allclose(np.linalg.norm(u, axis=0), 1.0, atol=1e-14)


def test_uscores_shape_and_n(rng):
    u = uscores(rng.standard_normal((6, 4)))
    assert u.values.shape == (5, 4)
    assert u.n == 6


def test_zero_variance_column_rejected():
    x = np.c_[np.arange(5.0), np.full(5, 3.0)]
    with pytest.raises(ValueError, match="column 1"):
        standardize(x)


def test_basis_dimension_mismatch():
    z = standardize(np.random.default_rng(0).standard_normal((5, 3)))
    with pytest.raises(ValueError):
        compute_uscores(z, build_basis(6))


@given(st.integers(3, 20), st.integers(1, 12), st.integers(0, 2**32 - 1),
       st.floats(0.01, 100), st.floats(-50, 50))
def test_affine_invariance(n, p, seed, scale, shift):
    x = np.random.default_rng(seed).standard_normal((n, p))
    a, b = uscores(x).values, uscores(scale * x + shift).values
    np.testing.assert_allclose(a, b, atol=1e-9)
