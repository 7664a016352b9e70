"""Exact observation symbols Y = N / M as reduced fractions."""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd

import numpy as np

from utils.errors import ParameterError


@total_ordering
@dataclass(frozen=True)
class Symbol:
    num: int
    den: int

    def __post_init__(self):
        if self.den < 1 or not 0 <= self.num <= self.den:
            raise ParameterError(f"symbol {self.num}/{self.den} needs 0 <= num <= den, den >= 1")
        g = gcd(self.num, self.den)
        object.__setattr__(self, "num", self.num // g)
        object.__setattr__(self, "den", self.den // g)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __lt__(self, other: "Symbol") -> bool:
        return self.value < other.value

    def __float__(self) -> float:
        return self.num / self.den

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def support_symbols(M_bar: int) -> list[Symbol]:
    """Every value N/M can take with 1 <= M <= M_bar + 1, sorted."""
    return sorted({Symbol(k, m) for m in range(1, M_bar + 2) for k in range(m + 1)})


@lru_cache(maxsize=8)
def trajectory_codes(traj) -> tuple[np.ndarray, tuple[Symbol, ...]]:
    """Integer code of every observation, indexing the sorted alphabet.

    Codes order like the symbol values, so sorting codes sorts symbols.
    """
    max_m = int(traj.M.max())
    alphabet = support_symbols(max_m - 1)
    index = {s: i for i, s in enumerate(alphabet)}
    lookup = np.full((max_m + 1, max_m + 1), -1, dtype=np.int64)
    for m in range(1, max_m + 1):
        for k in range(m + 1):
            lookup[k, m] = index[Symbol(k, m)]
    return lookup[traj.N, traj.M], tuple(alphabet)
