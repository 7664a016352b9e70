import logging
from dataclasses import dataclass

import numpy as np

from simulator import Trajectory
from utils.errors import ParameterError, ValidationError

PAIRING_MODES = ("naive", "genie")


@dataclass(frozen=True, eq=False)
class PairSet:
    """Time-adjacent sample pairs (prev, next) as two index arrays into a trajectory."""
    prev: np.ndarray
    next: np.ndarray
    mode: str = "naive"

    def __len__(self) -> int:
        return len(self.prev)

    def as_list(self) -> list[tuple[int, int]]:
        return list(zip(self.prev.tolist(), self.next.tolist()))

    def same_pairs(self, other: "PairSet") -> bool:
        return np.array_equal(self.prev, other.prev) and np.array_equal(self.next, other.next)


def build_pairs(traj: Trajectory, mode: str = "naive") -> PairSet:
    """Pair every sample t+1 with a parent.

    naive: the previous step t. genie: the generating parent, t when C(t) = 1 and
    t - d when C(t) = 0.
    """
    if mode not in PAIRING_MODES:
        raise ParameterError(f"pairing mode {mode!r} not one of {', '.join(PAIRING_MODES)}")
    nxt = np.arange(1, traj.T, dtype=np.int64)
    prev = nxt - 1
    if mode == "naive":
        return PairSet(prev, nxt, mode)

    traj.require_hidden()
    tails = traj.C[:-1] == 0
    prev = np.where(tails, prev - traj.d, prev)
    if np.any(prev < 0):
        first = int(np.argmax(prev < 0))
        raise ValidationError([f"reset at t={first} reaches before the start of the trajectory"], what="trajectory")
    logging.debug("Genie pairing rewired %d of %d pairs", int(tails.sum()), len(nxt))
    return PairSet(prev, nxt, mode)


def collate_pairs(pairs: PairSet, d: int, offset: int = 0) -> PairSet:
    """Keep every (d+1)-th pair starting at ``offset``.

    With every eligible coin a tail, genie pairs collated this way form one
    consecutive chain, the pairing of a run without resets.
    """
    step = slice(offset, None, d + 1)
    return PairSet(pairs.prev[step].copy(), pairs.next[step].copy(), pairs.mode)


def is_chain(pairs: PairSet) -> bool:
    return bool(np.array_equal(pairs.prev[1:], pairs.next[:-1]))
