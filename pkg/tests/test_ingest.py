from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parsec.edges import EdgeSet
from parsec.ingest import DataError, load_matrix, read_edges, write_edges, write_matrix


def test_clean_table(tmp_path):
    f = tmp_path / "x.csv"
    f.write_text("a,b,c\n1,2,3\n4,5,7\n7,9,8\n0,1,1\n")
    d = load_matrix(f)
    assert (d.n, d.p) == (4, 3)
    assert d.column_names == ["a", "b", "c"]
    assert d.dropped_rows == 0


def test_missing_cell_drops_row(tmp_path, caplog):
    f = tmp_path / "x.csv"
    f.write_text("a,b,c\n1,2,3\n4,,6\n7,9,8\n0,1,1\n2,2,5\n")
    with caplog.at_level("WARNING"):
        d = load_matrix(f)
    assert d.n == 4 and d.dropped_rows == 1
    assert "1 row dropped" in caplog.text


@pytest.mark.parametrize("bad", ["nan", "inf", "abc"])
def test_non_numeric_or_non_finite_dropped(tmp_path, bad):
    f = tmp_path / "x.csv"
    f.write_text(f"a,b\n1,2\n{bad},3\n4,6\n7,1\n")
    assert load_matrix(f).n == 3


def test_constant_column_named(tmp_path):
    f = tmp_path / "x.csv"
    f.write_text("a,b\n1,5\n2,5\n3,5\n")
    with pytest.raises(DataError, match="column 1"):
        load_matrix(f)


def test_too_few_rows(tmp_path):
    f = tmp_path / "x.csv"
    f.write_text("a,b\n1,5\n2,,\n3,4\n")
    with pytest.raises(DataError):
        load_matrix(f)


def test_ragged_and_unreadable(tmp_path):
    f = tmp_path / "x.csv"
    f.write_text("a,b\n1,5\n2,4,3\n3,4\n")
    with pytest.raises(DataError, match="fields"):
        load_matrix(f)
    with pytest.raises(DataError):
        load_matrix(tmp_path / "missing.csv")


def test_headerless_and_delimiter(tmp_path):
    f = tmp_path / "x.tsv"
    f.write_text("1\t2\n3\t5\n4\t4\n")
    d = load_matrix(f, delimiter="\t", has_header=False)
    assert d.column_names is None and d.values.shape == (3, 2)


def test_matrix_roundtrip(tmp_path, rng):
    x = rng.standard_normal((6, 4)) * 10.0 ** rng.integers(-200, 200, (6, 4))
    f = tmp_path / "m.csv"
    write_matrix(x, f, ["a", "b", "c", "d"])
    assert np.array_equal(load_matrix(f).values, x)


def test_empty_edges(tmp_path):
    f = tmp_path / "e.csv"
    write_edges(EdgeSet.empty(), f)
    assert f.read_text() == "i,j,statistic,p_value\n"
    assert len(read_edges(f)) == 0


def test_single_edge(tmp_path):
    f = tmp_path / "e.csv"
    e = EdgeSet([1], [2], [0.9], [1e-4])
    write_edges(e, f)
    assert f.read_text().splitlines()[1] == "1,2,0.90000000000000002,0.0001"
    assert read_edges(f).equals(e)


def test_random_edges_sorted_and_roundtrip(tmp_path, rng):
    i = rng.integers(0, 50, 100)
    j = i + rng.integers(1, 50, 100)
    e = EdgeSet(i, j, rng.uniform(-1, 1, 100), np.round(rng.random(100), 2))
    f = tmp_path / "e.csv"
    write_edges(e, f)
    back = read_edges(f)
    assert back.equals(e)
    # sort + reparse oracle
    rows = [tuple(float(v) for v in line.split(",")) for line in f.read_text().splitlines()[1:]]
    assert rows == sorted(rows, key=lambda r: (r[3], r[0], r[1]))
    assert np.array_equal(back.p_value, np.sort(e.p_value))


def test_edgeset_validation():
    with pytest.raises(ValueError):
        EdgeSet([2], [1], [0.5], [0.1])
    with pytest.raises(ValueError):
        EdgeSet([0], [1], [0.5], [1.5])
    with pytest.raises(ValueError):
        EdgeSet([0, 1], [1], [0.5], [0.1])


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=20))
def test_float_roundtrip(tmp_path_factory, vals):
    f = tmp_path_factory.mktemp("rt") / "e.csv"
    n = len(vals)
    e = EdgeSet(np.zeros(n), np.arange(1, n + 1), vals, np.linspace(0, 1, n))
    write_edges(e, f)
    assert read_edges(f).equals(e)
