from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pinv_row_oracle(x: np.ndarray, j: int) -> np.ndarray:
    """Row j of H from the projection definition, using pseudo-inverses only."""
    xc = x - x.mean(axis=0)
    z = xc / np.linalg.norm(xc, axis=0)
    n = x.shape[0]
    # any orthonormal basis of the complement of 1 gives the same inner products
    q, _ = np.linalg.qr(np.c_[np.ones(n), np.eye(n)[:, : n - 1]])
    u = q[:, 1:].T @ z
    others = np.delete(u, j, axis=1)
    c = np.linalg.pinv(others.T)  # (U U')^{-1} U for full row rank
    c = c / np.linalg.norm(c, axis=0)
    row = np.ones(x.shape[1])
    row[np.arange(x.shape[1]) != j] = c.T @ u[:, j]
    return row


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
