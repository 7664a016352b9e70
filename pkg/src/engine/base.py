import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, final

from entropy import PairSet, cond_entropy
from simulator import Trajectory
from utils.errors import ParameterError


class TraceEntry(NamedTuple):
    event: str  # accept | reject | promote | size-cap
    node: Optional[int]
    score: Optional[float]
    outer: int = 0


@dataclass
class NeighborhoodResult:
    node: int
    neighbors: frozenset[int]
    trace: list[TraceEntry] = field(default_factory=list)
    converged: bool = True
    evaluations: int = 0
    scores: dict[int, float] = field(default_factory=dict)


@dataclass
class RecoveredGraph:
    node_count: int
    kappa: float
    neighborhoods: dict[int, frozenset[int]]
    trace: dict[int, list[TraceEntry]] = field(default_factory=dict)
    scores: dict[tuple[int, int], float] = field(default_factory=dict)
    converged: bool = True
    engine: str = "greedy"

    def edge_set(self) -> set[tuple[int, int]]:
        return {(u, v) for v, nb in self.neighborhoods.items() for u in nb if u != v}

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "neighborhoods": {str(v): sorted(nb) for v, nb in sorted(self.neighborhoods.items())},
            "converged": self.converged,
        }

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        return path

    def save_trace(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as f:
            for v in sorted(self.trace):
                for entry in self.trace[v]:
                    f.write(json.dumps({"v": v, **entry._asdict()}) + "\n")
        return path


def entropy_drop(traj: Trajectory, pairs: PairSet, v: int, Q: Iterable[int], u: int) -> float:
    """H(v+ | v, Q) - H(v+ | v, Q + u)."""
    Q = set(Q)
    return max(cond_entropy(traj, pairs, v, Q) - cond_entropy(traj, pairs, v, Q | {u}), 0.0)


class BaseRecovery(ABC):
    """One node's neighbourhood search over a fixed pair set.

    Subclasses implement :meth:`_search`; conditional entropies are memoized per
    conditioning set for the lifetime of the instance.
    """
    name = ""

    def __init__(self, traj: Trajectory, pairs: PairSet, v: int, kappa: float, max_set: int):
        n = traj.node_count
        if not kappa > 0:
            raise ParameterError(f"kappa must be positive, got {kappa}")
        if not 0 <= v < n:
            raise ParameterError(f"node {v} outside [0, {n})")
        if not 0 <= max_set <= max(n - 1, 0):
            raise ParameterError(f"max_set must be in [0, {n - 1}], got {max_set}")
        self._traj = traj
        self._pairs = pairs
        self._v = v
        self._kappa = kappa
        self._max_set = max_set
        self._memo: dict[frozenset[int], float] = {}
        self.trace: list[TraceEntry] = []
        self.scores: dict[int, float] = {}
        self.converged = True

    @property
    def threshold(self) -> float:
        return self._kappa / 2

    @property
    def evaluations(self) -> int:
        return len(self._memo)

    def _candidates(self, chosen: Iterable[int]) -> list[int]:
        chosen = set(chosen)
        return [k for k in range(self._traj.node_count) if k != self._v and k not in chosen]

    def _cond_entropy(self, Q: frozenset[int]) -> float:
        if Q not in self._memo:
            self._memo[Q] = cond_entropy(self._traj, self._pairs, self._v, Q)
        return self._memo[Q]

    def gain(self, Q: Iterable[int], k: int) -> float:
        Q = frozenset(Q)
        return max(self._cond_entropy(Q) - self._cond_entropy(Q | {k}), 0.0)

    def _log(self, event: str, node: Optional[int], score: Optional[float], outer: int = 0):
        self.trace.append(TraceEntry(event, node, score, outer))

    @abstractmethod
    def _search(self) -> Optional[set[int]]:
        pass

    @final
    def start(self) -> NeighborhoodResult:
        found = self._search()
        if found is None:
            self.converged = False
            found = set()
        negative = [e for e in self.trace if e.score is not None and e.score < 0]
        assert not negative, f"negative entropy drop in trace: {negative}"
        logging.debug("%s: node %d -> %s after %d entropy evaluations",
                      self.name, self._v, sorted(found), self.evaluations)
        return NeighborhoodResult(
            node=self._v,
            neighbors=frozenset(found),
            trace=list(self.trace),
            converged=self.converged,
            evaluations=self.evaluations,
            scores=dict(self.scores),
        )
