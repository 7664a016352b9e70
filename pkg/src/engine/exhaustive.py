from itertools import combinations
from typing import Optional

from config import EXHAUSTIVE_MAX_NODES
from engine.base import BaseRecovery
from entropy import PairSet
from simulator import Trajectory
from utils.errors import GuardError


class ExhaustiveSearch(BaseRecovery):
    """Brute-force reference: the smallest set S that leaves no candidate above kappa / 2.

    Sizes are tried in increasing order and ``combinations`` yields each size in
    lexicographic order, so the first qualifying set wins both tie rules.
    """
    name = "exhaustive"

    def __init__(self, traj: Trajectory, pairs: PairSet, v: int, kappa: float, max_set: int):
        if traj.node_count > EXHAUSTIVE_MAX_NODES:
            raise GuardError(f"exhaustive search limited to {EXHAUSTIVE_MAX_NODES} nodes, got {traj.node_count}")
        super().__init__(traj, pairs, v, kappa, max_set)

    def _closes(self, subset: tuple[int, ...]) -> bool:
        for u in self._candidates(subset):
            score = self.gain(subset, u)
            if score > self.threshold:
                self._log("reject", u, score, len(subset))
                return False
        return True

    def _search(self) -> Optional[set[int]]:
        others = self._candidates(())
        for size in range(self._max_set + 1):
            for subset in combinations(others, size):
                if self._closes(subset):
                    for u in subset:
                        self.scores[u] = self.gain(set(subset) - {u}, u)
                        self._log("promote", u, self.scores[u], size)
                    return set(subset)
        self._log("size-cap", None, None, self._max_set)
        return None
