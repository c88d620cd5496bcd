"""Reading data matrices and reading/writing edge lists and matrices as CSV.

All floats are written with 17 significant digits so that a write/read
round trip reproduces every value exactly.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .edges import EdgeSet

log = logging.getLogger(__name__)

EDGE_HEADER = ["i", "j", "statistic", "p_value"]


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class DataMatrix:
    values: np.ndarray
    column_names: list[str] | None = None
    dropped_rows: int = 0

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse(cell: str) -> float:
    v = float(cell.strip())
    if not math.isfinite(v):
        raise ValueError(cell)
    return v


def check_matrix(values: np.ndarray, names: list[str] | None = None) -> None:
    """Enforce ``n >= 3``, finiteness and positive variance in every column."""
    if values.ndim != 2 or values.shape[1] == 0:
        raise DataError("data must be a non-empty two-dimensional table")
    if values.shape[0] < 3:
        raise DataError(f"need at least 3 complete rows, found {values.shape[0]}")
    if not np.all(np.isfinite(values)):
        raise DataError("data contains non-finite entries")
    spread = np.ptp(values, axis=0)
    bad = np.flatnonzero(spread == 0)
    if bad.size:
        j = int(bad[0])
        label = f" ({names[j]!r})" if names else ""
        raise DataError(f"column {j}{label} has zero variance")


def load_matrix(path, delimiter: str = ",", has_header: bool = True) -> DataMatrix:
    """Read a rectangular numeric table, dropping rows with missing cells."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh, delimiter=delimiter))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    names = None
    if has_header:
        if not rows:
            raise DataError(f"{path} is empty")
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
    width = len(names) if names is not None else (len(rows[0]) if rows else 0)
    kept, dropped = [], 0
    for lineno, r in enumerate(rows, start=2 if has_header else 1):
        if len(r) != width:
            raise DataError(f"row at line {lineno} has {len(r)} fields, expected {width}")
        try:
            kept.append([_parse(c) for c in r])
        except ValueError:
            dropped += 1
    if dropped:
        log.warning("%d row%s dropped for missing or non-numeric cells", dropped, "" if dropped == 1 else "s")
    values = np.array(kept, dtype=float).reshape(len(kept), width)
    check_matrix(values, names)
    return DataMatrix(values, names, dropped)


def write_matrix(values, path, column_names: list[str] | None = None) -> None:
    values = np.asarray(values, dtype=float)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if column_names is not None:
            w.writerow(column_names)
        for row in values:
            w.writerow([fmt(v) for v in row])


def read_matrix(path, has_header: bool = False) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if has_header:
        rows = rows[1:]
    return np.array([[float(c) for c in r] for r in rows if r], dtype=float)


def write_edges(edges: EdgeSet, path) -> None:
    """CSV ``i,j,statistic,p_value`` sorted by p-value then ``(i, j)``."""
    e = edges.sorted()
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(EDGE_HEADER)
            for i, j, s, pv in zip(e.i.tolist(), e.j.tolist(), e.statistic, e.p_value):
                w.writerow([i, j, fmt(s), fmt(pv)])
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def read_edges(path) -> EdgeSet:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != EDGE_HEADER[:2]:
            raise DataError(f"{path} is not an edge list (expected header {','.join(EDGE_HEADER)})")
        rows = [r for r in reader if r]
    if not rows:
        return EdgeSet.empty()
    cols = list(zip(*rows))
    stat = cols[2] if len(cols) > 2 else ["nan"] * len(rows)
    pv = cols[3] if len(cols) > 3 else ["0"] * len(rows)
    return EdgeSet(
        np.array(cols[0], dtype=np.int64),
        np.array(cols[1], dtype=np.int64),
        np.array(stat, dtype=float),
        np.array(pv, dtype=float),
    )


def write_pairs(pairs, path) -> None:
    """Write a bare ``i,j`` pair list (e.g. true edges of a simulated model)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["i", "j"])
        for i, j in sorted(pairs):
            w.writerow([i, j])


def ensure_parent(path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path
