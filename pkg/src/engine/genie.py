from typing import Iterable

from engine.base import entropy_drop
from entropy import build_pairs
from simulator import Trajectory
from utils.errors import ParameterError


def genie_gap(traj: Trajectory, v: int, u: int, Q: Iterable[int] = ()) -> tuple[float, float]:
    """Entropy drop from adding u to Q, under naive and under genie pairing.

    Raises:
        MissingHiddenDataError: When the trajectory has no reset coins
    """
    Q = set(Q)
    if u == v or u in Q:
        raise ParameterError(f"candidate {u} must lie outside Q + v (v={v}, Q={sorted(Q)})")
    genie = build_pairs(traj.require_hidden(), "genie")
    naive = build_pairs(traj, "naive")
    return entropy_drop(traj, naive, v, Q, u), entropy_drop(traj, genie, v, Q, u)


def gap_profile(traj: Trajectory, v: int, neighbors: Iterable[int]) -> dict[int, tuple[float, float]]:
    """Per-candidate genie gaps: true neighbours against the empty set, others against the full neighbourhood."""
    neighbors = set(neighbors)
    profile = {}
    for u in range(traj.node_count):
        if u == v:
            continue
        Q = set() if u in neighbors else neighbors
        profile[u] = genie_gap(traj, v, u, Q)
    return profile
