from graph.model import (
    Edge,
    InfluenceGraph,
    NodeParams,
    lipschitz_bounds,
    load_graph,
    make_line,
    make_random,
    make_ring,
    permute,
    require_valid,
    save_graph,
    validate,
)
from graph.matrix import InfluenceMatrix, influence_matrix, spectral_radius


def make_graph(kind: str, n: int, params: NodeParams = NodeParams(), in_degree: int = 2, seed: int = 0) -> InfluenceGraph:
    if kind == "ring":
        return make_ring(n, params)
    if kind == "line":
        return make_line(n, params)
    if kind == "random":
        return make_random(n, in_degree, seed, params)
    raise ValueError(f"unknown graph kind {kind!r}")
