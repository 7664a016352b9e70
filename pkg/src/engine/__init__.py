import logging
from typing import Optional

from tqdm import tqdm

from bounds import pmax_bound
from engine.base import BaseRecovery, NeighborhoodResult, RecoveredGraph, TraceEntry, entropy_drop
from engine.exhaustive import ExhaustiveSearch
from engine.genie import gap_profile, genie_gap
from engine.greedy import PIMRecGreedy
from entropy import PairSet, build_pairs
from simulator import Trajectory
from utils.errors import ParameterError

RECOVERY_MAP: dict[str, type[BaseRecovery]] = {
    "greedy": PIMRecGreedy,
    "exhaustive": ExhaustiveSearch,
}


def default_max_set(node_count: int, kappa: float, M_bar: int) -> int:
    """Conditioning-set cap: the |P|max bound at threshold kappa, at most |V| - 1."""
    return min(node_count - 1, pmax_bound(kappa, M_bar))


def _engine(name: str) -> type[BaseRecovery]:
    try:
        return RECOVERY_MAP[name]
    except KeyError:
        raise ParameterError(f"unknown recovery engine {name!r}, choose from {', '.join(RECOVERY_MAP)}") from None


def recover_neighborhood(traj: Trajectory, pairs: PairSet, v: int, kappa: float,
                         max_set: Optional[int] = None, engine: str = "greedy") -> NeighborhoodResult:
    if max_set is None:
        max_set = default_max_set(traj.node_count, kappa, int(traj.M.max()) - 1)
    return _engine(engine)(traj, pairs, v, kappa, max_set).start()


def exhaustive_neighborhood(traj: Trajectory, pairs: PairSet, v: int, kappa: float, max_size: int) -> Optional[set[int]]:
    """Smallest closing set of size <= max_size, or None when no such set exists."""
    result = ExhaustiveSearch(traj, pairs, v, kappa, max_size).start()
    return set(result.neighbors) if result.converged else None


def recover_graph(traj: Trajectory, kappa: float, max_set: Optional[int] = None, pairing: str = "naive",
                  engine: str = "greedy", progress: bool = False) -> RecoveredGraph:
    """Run the neighbourhood search for every node over one shared pair set."""
    if traj.T < 2:
        raise ParameterError(f"recovery needs T >= 2, got {traj.T}")
    if not kappa > 0:
        raise ParameterError(f"kappa must be positive, got {kappa}")
    pairs = build_pairs(traj, pairing)
    results = [
        recover_neighborhood(traj, pairs, v, kappa, max_set, engine)
        for v in tqdm(range(traj.node_count), desc="recover", unit="node", disable=not progress)
    ]
    recovered = RecoveredGraph(
        node_count=traj.node_count,
        kappa=kappa,
        neighborhoods={r.node: r.neighbors for r in results},
        trace={r.node: r.trace for r in results},
        scores={(u, r.node): r.scores[u] for r in results for u in r.neighbors if u in r.scores},
        converged=all(r.converged for r in results),
        engine=engine,
    )
    logging.info("Recovered %d edges over %d nodes with %s (kappa=%g, converged=%s)",
                 len(recovered.edge_set()), traj.node_count, engine, kappa, recovered.converged)
    return recovered
