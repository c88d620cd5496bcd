from __future__ import annotations

import numpy as np
import pytest

from parsec.inference import ErrorControlSpec
from parsec.screening import screen, statistic_matrix
from parsec.simgen import StructureSpec, build_structure, sample_gaussian
from parsec.uscore import uscores

SPECS = [
    ErrorControlSpec("fwer"),
    ErrorControlSpec("kfwer", k=40),
    ErrorControlSpec("fdr-bh", 0.1),
    ErrorControlSpec("fdr-by", 0.2),
    ErrorControlSpec("pfdr", 0.1),
    ErrorControlSpec("rho", rho=0.45),
]


@pytest.fixture(scope="module")
def signal_data():
    model = build_structure(StructureSpec("ar_block", 600, a=50))
    return sample_gaussian(model, 80, 1)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_low_memory_matches_dense(signal_data, spec):
    dense = screen(signal_data, spec)
    lean = screen(signal_data, spec, low_memory=True)
    assert dense.level == lean.level
    assert dense.edges.equals(lean.edges)
    assert len(dense.edges) > 0


def test_levels_and_diagnostics(signal_data):
    r = screen(signal_data, ErrorControlSpec("fwer"))
    assert r.achieved_error == pytest.approx(0.05, rel=1e-8)
    assert np.all(np.abs(r.edges.statistic) >= r.level)
    raw = screen(signal_data, ErrorControlSpec("rho", rho=0.45))
    assert raw.level == 0.45 and raw.implied_k is not None
    s = raw.summary()
    assert s["discoveries"] == len(raw.edges) and s["control"] == "rho"


def test_methods_agree_on_base_and_scalable(rng):
    x = rng.standard_normal((12, 80))
    u = uscores(x)
    np.testing.assert_allclose(statistic_matrix(u, "parsec-base"), statistic_matrix(u, "parsec-scalable"), atol=1e-10)


def test_pcs_hub_rejects_fdr(signal_data):
    with pytest.raises(ValueError, match="pcs-hub"):
        screen(signal_data, ErrorControlSpec("fdr-bh"), method="pcs-hub")
    r = screen(signal_data, ErrorControlSpec("fwer"), method="pcs-hub")
    assert r.method == "pcs-hub"


def test_low_memory_needs_scalable(signal_data):
    with pytest.raises(ValueError):
        screen(signal_data, ErrorControlSpec("fwer"), method="parsec-base", low_memory=True)
    with pytest.raises(ValueError):
        screen(signal_data, ErrorControlSpec("fwer"), low_memory=True, mode="average")


def test_unknown_method(signal_data):
    with pytest.raises(ValueError):
        screen(signal_data, ErrorControlSpec("fwer"), method="glasso")


def test_threads_do_not_change_edges(signal_data):
    a = screen(signal_data, ErrorControlSpec("fdr-bh", 0.1), threads=1)
    b = screen(signal_data, ErrorControlSpec("fdr-bh", 0.1), threads=4)
    assert a.edges.equals(b.edges)
