from bounds.theorem import (
    READINGS,
    BoundInputs,
    BoundResult,
    concentration_term,
    l1_entropy_slack,
    max_l1_target,
    mixing_condition,
    pmax_bound,
    reset_tail_bound,
    schedule_head_probability,
    schedule_margin,
    support_size,
    t_min,
    theorem1_sample_size,
    verify_closure,
    w_chain_tail_bound,
    xi_size,
)
from graph import InfluenceGraph, influence_matrix, lipschitz_bounds, spectral_radius


def inputs_from_graph(g: InfluenceGraph, **overrides) -> BoundInputs:
    """BoundInputs with |V|, mu_bar, L and rho taken from the graph."""
    mu_bar, L = lipschitz_bounds(g)
    values = {
        "V_size": g.node_count,
        "mu_bar": mu_bar,
        "L": L,
        "rho": spectral_radius(influence_matrix(g)),
    }
    values.update(overrides)
    return BoundInputs(**values)
