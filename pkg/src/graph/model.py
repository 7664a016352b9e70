"""Directed influence graph with per-node behaviour parameters."""
import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from config import WEIGHT_SUM_TOLERANCE
from utils.errors import ParameterError, ValidationError


@dataclass(frozen=True)
class NodeParams:
    alpha: float = 0.8  # openness to neighbours, (0, 1)
    l: float = 0.167  # intrinsic bias, [0, 1]
    mu_slope: float = 0.4  # mu_v(x) = mu_slope * x
    zbar: float = 0.5  # mean of the fluctuation Z_v(t), (0, 1)

    @classmethod
    def from_dict(cls, data: dict) -> "NodeParams":
        return cls(
            alpha=float(data.get("alpha", cls.alpha)),
            l=float(data.get("l", cls.l)),
            mu_slope=float(data.get("mu_slope", cls.mu_slope)),
            zbar=float(data.get("zbar", cls.zbar)),
        )


class Edge(NamedTuple):
    source: int
    target: int
    weight: float


@dataclass(frozen=True)
class InfluenceGraph:
    """G = (V, E) with weights a_uv on edges and an explicit self-weight a_vv per node.

    Edges never carry self-loops; self-influence lives in ``self_weights``.
    Construction does not validate, call :func:`validate` for the violation list.
    """
    node_count: int
    params: tuple[NodeParams, ...]
    edges: tuple[Edge, ...]
    self_weights: tuple[float, ...]

    def in_neighbors(self, v: int) -> list[int]:
        return sorted(e.source for e in self.edges if e.target == v and e.source != v)

    def edge_set(self) -> set[tuple[int, int]]:
        """Directed edges (u, v) with u != v, the part recovery can see."""
        return {(e.source, e.target) for e in self.edges if e.source != e.target}

    def weight_matrix(self) -> np.ndarray:
        """W[u, v] = a_uv including the diagonal self-weights."""
        w = np.zeros((self.node_count, self.node_count))
        for e in self.edges:
            w[e.source, e.target] += e.weight
        w[np.diag_indices(self.node_count)] += np.asarray(self.self_weights, dtype=float)
        return w

    def with_edge_weight(self, source: int, target: int, weight: float) -> "InfluenceGraph":
        edges = tuple(
            Edge(e.source, e.target, weight) if (e.source, e.target) == (source, target) else e
            for e in self.edges
        )
        return replace(self, edges=edges)

    def with_params(self, v: int, **changes) -> "InfluenceGraph":
        params = list(self.params)
        params[v] = replace(params[v], **changes)
        return replace(self, params=tuple(params))

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {"alpha": p.alpha, "l": p.l, "mu_slope": p.mu_slope, "zbar": p.zbar, "self_weight": s}
                for p, s in zip(self.params, self.self_weights)
            ],
            "edges": [{"from": e.source, "to": e.target, "weight": e.weight} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "InfluenceGraph":
        nodes = data["nodes"]
        return cls(
            node_count=len(nodes),
            params=tuple(NodeParams.from_dict(n) for n in nodes),
            edges=tuple(Edge(int(e["from"]), int(e["to"]), float(e["weight"])) for e in data["edges"]),
            self_weights=tuple(float(n.get("self_weight", 0.0)) for n in nodes),
        )


def _assemble(n: int, params: NodeParams | Sequence[NodeParams], in_lists: list[list[int]]) -> InfluenceGraph:
    # neighbours share the mass equally; a node without in-neighbours keeps all of it on itself
    if isinstance(params, NodeParams):
        params = [params] * n
    edges = []
    self_weights = []
    for v, sources in enumerate(in_lists):
        if sources:
            weight = 1.0 / len(sources)
            edges.extend(Edge(u, v, weight) for u in sorted(sources))
            self_weights.append(0.0)
        else:
            self_weights.append(1.0)
    edges.sort(key=lambda e: (e.source, e.target))
    return InfluenceGraph(n, tuple(params), tuple(edges), tuple(self_weights))


def make_ring(n: int, params: NodeParams | Sequence[NodeParams] = NodeParams()) -> InfluenceGraph:
    """Directed cycle v -> v+1 mod n."""
    if n < 2:
        raise ParameterError(f"ring needs at least 2 nodes, got {n}")
    return _assemble(n, params, [[(v - 1) % n] for v in range(n)])


def make_line(n: int, params: NodeParams | Sequence[NodeParams] = NodeParams()) -> InfluenceGraph:
    """Path v -> v+1; node 0 has no in-neighbour and self-weight 1."""
    if n < 2:
        raise ParameterError(f"line needs at least 2 nodes, got {n}")
    return _assemble(n, params, [[]] + [[v - 1] for v in range(1, n)])


def make_random(n: int, in_degree: int, seed: int,
                params: NodeParams | Sequence[NodeParams] = NodeParams()) -> InfluenceGraph:
    """Every node draws ``in_degree`` distinct in-neighbours uniformly, weights 1/in_degree."""
    if n < 2:
        raise ParameterError(f"random graph needs at least 2 nodes, got {n}")
    if not 1 <= in_degree <= n - 1:
        raise ParameterError(f"in_degree must be in [1, {n - 1}], got {in_degree}")
    rng = np.random.default_rng(seed)
    in_lists = []
    for v in range(n):
        pool = [u for u in range(n) if u != v]
        in_lists.append(sorted(int(u) for u in rng.choice(pool, size=in_degree, replace=False)))
    return _assemble(n, params, in_lists)


def validate(g: InfluenceGraph, allow_degenerate: bool = False) -> list[str]:
    """Check every graph invariant and describe each violation.

    Args:
        g: The graph to check
        allow_degenerate: Accept alpha_v in [0, 1] instead of (0, 1); the simulator
            uses this for closed-form runs where the social term vanishes

    Returns:
        Empty list when every invariant holds
    """
    violations = []
    n = g.node_count
    if n < 1:
        return [f"node_count={n} must be positive"]
    if len(g.params) != n:
        violations.append(f"expected {n} node parameter sets, got {len(g.params)}")
    if len(g.self_weights) != n:
        violations.append(f"expected {n} self-weights, got {len(g.self_weights)}")
    if violations:
        return violations

    for v, p in enumerate(g.params):
        alpha_ok = 0 <= p.alpha <= 1 if allow_degenerate else 0 < p.alpha < 1
        if not alpha_ok:
            violations.append(f"node {v}: alpha={p.alpha} outside {'[0, 1]' if allow_degenerate else '(0, 1)'}")
        if not 0 <= p.l <= 1:
            violations.append(f"node {v}: l={p.l} outside [0, 1]")
        if p.mu_slope < 0:
            violations.append(f"node {v}: mu_slope={p.mu_slope} is negative")
        if not 0 < p.zbar < 1:
            violations.append(f"node {v}: zbar={p.zbar} outside (0, 1)")
        if g.self_weights[v] < 0:
            violations.append(f"node {v}: self_weight={g.self_weights[v]} is negative")

    seen = set()
    totals = list(g.self_weights)
    for e in g.edges:
        key = (e.source, e.target)
        if not (0 <= e.source < n and 0 <= e.target < n):
            violations.append(f"edge {e.source}->{e.target}: node index outside [0, {n})")
            continue
        if e.source == e.target:
            violations.append(f"edge {e.source}->{e.target}: self-influence belongs in self_weight")
        if key in seen:
            violations.append(f"edge {e.source}->{e.target}: duplicate")
        seen.add(key)
        if not 0 < e.weight <= 1:
            violations.append(f"edge {e.source}->{e.target}: weight={e.weight} outside (0, 1]")
        totals[e.target] += e.weight

    for v, total in enumerate(totals):
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            violations.append(f"node {v}: incoming weights plus self-weight sum to {total:.12g}, expected 1")
    return violations


def require_valid(g: InfluenceGraph, allow_degenerate: bool = False) -> InfluenceGraph:
    violations = validate(g, allow_degenerate=allow_degenerate)
    if violations:
        raise ValidationError(violations)
    return g


def permute(g: InfluenceGraph, perm: Sequence[int]) -> InfluenceGraph:
    """Relabel node i as perm[i]."""
    n = g.node_count
    if sorted(perm) != list(range(n)):
        raise ParameterError(f"not a permutation of range({n}): {list(perm)}")
    params = [None] * n
    self_weights = [0.0] * n
    for i, j in enumerate(perm):
        params[j] = g.params[i]
        self_weights[j] = g.self_weights[i]
    edges = sorted(
        (Edge(perm[e.source], perm[e.target], e.weight) for e in g.edges),
        key=lambda e: (e.source, e.target),
    )
    return InfluenceGraph(n, tuple(params), tuple(edges), tuple(self_weights))


def lipschitz_bounds(g: InfluenceGraph) -> tuple[float, float]:
    """(mu_bar, L) for linear rates mu_v(x) = c_v x on [0, 1]: both equal max_v c_v."""
    slope = max(p.mu_slope for p in g.params)
    return slope, slope


def save_graph(g: InfluenceGraph, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(g.to_dict(), indent=2) + "\n")
    logging.info("Saved %d-node graph with %d edges to %s", g.node_count, len(g.edges), path)
    return path


def load_graph(path: str | Path) -> InfluenceGraph:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
        g = InfluenceGraph.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError([f"{path}: malformed graph file ({e})"]) from e
    return require_valid(g)
