from typing import NamedTuple

from engine import RecoveredGraph
from graph import InfluenceGraph
from utils.errors import IncompatibleError


class EdgeMetrics(NamedTuple):
    precision: float
    recall: float
    hamming: int
    exact: bool


def edge_metrics(truth: InfluenceGraph, est: RecoveredGraph) -> EdgeMetrics:
    """Compare directed edge sets with self-loops removed on both sides.

    An empty estimate has precision 1 against an empty truth and 0 otherwise;
    recall against an empty truth is 1.
    """
    if truth.node_count != est.node_count:
        raise IncompatibleError(f"node sets differ: truth has {truth.node_count}, estimate {est.node_count}")
    E = truth.edge_set()
    E_hat = est.edge_set()
    hits = len(E & E_hat)
    if E_hat:
        precision = hits / len(E_hat)
    else:
        precision = 1.0 if not E else 0.0
    recall = hits / len(E) if E else 1.0
    hamming = len(E ^ E_hat)
    return EdgeMetrics(precision, recall, hamming, hamming == 0)
