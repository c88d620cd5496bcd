from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EdgeSet:
    """Screened discoveries, one row per pair ``i < j``."""

    i: np.ndarray
    j: np.ndarray
    statistic: np.ndarray
    p_value: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "i", np.asarray(self.i, dtype=np.int64).ravel())
        object.__setattr__(self, "j", np.asarray(self.j, dtype=np.int64).ravel())
        object.__setattr__(self, "statistic", np.asarray(self.statistic, dtype=float).ravel())
        object.__setattr__(self, "p_value", np.asarray(self.p_value, dtype=float).ravel())
        n = self.i.size
        if not (self.j.size == self.statistic.size == self.p_value.size == n):
            raise ValueError("edge columns have different lengths")
        if n and np.any(self.i >= self.j):
            raise ValueError("edges must satisfy i < j")
        if n and (np.any(self.p_value < 0) or np.any(self.p_value > 1)):
            raise ValueError("p-values must lie in [0, 1]")

    @classmethod
    def empty(cls) -> "EdgeSet":
        return cls(np.empty(0), np.empty(0), np.empty(0), np.empty(0))

    def __len__(self) -> int:
        return int(self.i.size)

    def sorted(self) -> "EdgeSet":
        """Ascending p-value, ties broken by ``(i, j)``."""
        order = np.lexsort((self.j, self.i, self.p_value))
        return EdgeSet(self.i[order], self.j[order], self.statistic[order], self.p_value[order])

    def pairs(self) -> set[tuple[int, int]]:
        return set(zip(self.i.tolist(), self.j.tolist()))

    def equals(self, other: "EdgeSet") -> bool:
        a, b = self.sorted(), other.sorted()
        return (
            len(a) == len(b)
            and np.array_equal(a.i, b.i)
            and np.array_equal(a.j, b.j)
            and np.array_equal(a.statistic, b.statistic)
            and np.array_equal(a.p_value, b.p_value)
        )

    @classmethod
    def concat(cls, parts: list["EdgeSet"]) -> "EdgeSet":
        if not parts:
            return cls.empty()
        return cls(
            np.concatenate([e.i for e in parts]),
            np.concatenate([e.j for e in parts]),
            np.concatenate([e.statistic for e in parts]),
            np.concatenate([e.p_value for e in parts]),
        )
