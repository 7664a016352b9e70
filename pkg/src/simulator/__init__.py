from simulator.pim import (
    PimParams,
    Trajectory,
    replay_effective_index,
    reset_count,
    resolve_reset_probability,
    sample_M,
    simulate,
    stationary_mean_estimate,
)
from simulator.io import hidden_path_for, load_trajectory, save_trajectory
