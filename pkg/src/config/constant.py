class CliText:

    description = """
pim-recovery: simulate the Past Influence Model and recover its influence graph.

A Markov process over binary observations that, with probability 1-p, forgets
its last d steps and evolves from the state d steps back. The recovery engine
(PIMRecGreedy) learns the directed influence graph from observations alone.
    """

    epilog = """
subcommands:
  graph       generate a ring, line or random influence graph (JSON)
  simulate    run the dynamics and write a trajectory (JSON Lines)
  recover     recover the influence graph from a trajectory
  experiment  repeated seeded trials over T and kappa grids (CSV)
  crossval    pick kappa by cross-validation on labelled data (CSV)
  bound       evaluate the sample-size bound and its side conditions

exit codes: 0 success, 2 validation, 3 I/O, 4 infeasible schedule, 5 non-convergence
    """

    bound_header = "Sample-size bound"

    banner = """
 ___ ___ __  __   ___
| _ \\_ _|  \\/  | | _ \\___ __ _____ _____ _ _ _  _
|  _/| || |\\/| | |   / -_) _/ _ \\ V / -_) '_| || |
|_| |___|_|  |_| |_|_\\___\\__\\___/\\_/\\___|_|  \\_, |
                                             |__/
    """


# Published simulation parameters: node behaviour shared by every node.
PRESET_NODE = {"alpha": 0.8, "l": 0.167, "mu_slope": 0.4, "zbar": 0.5, "self_weight": 0.0}
PRESET_BETA = 0.75
# reset-probability schedule (1-p) = (T-1)^alpha_exp / (beta1 (T-d-1))
PRESET_SCHEDULE = {"alpha_exp": 0.5, "beta1": 0.75}
PRESET_NODES = 10

# Artifact choices: trial counts and grids are not published.
DEFAULT_T_GRID = [500, 1000, 2000, 3000, 4000]
DEFAULT_KAPPA_GRID = [0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.2]
DEFAULT_KAPPA = 0.3

FIGURES = {
    "fig1": {"mode": "recovery-vs-T", "d": 5, "M_bar": 1, "T_grid": [500, 1000, 2000, 3000]},
    "fig2": {"mode": "recovery-vs-T", "d": 10, "M_bar": 2, "T_grid": [500, 1000, 2000, 3000, 4000]},
    "fig3": {"mode": "crossval", "d": 5, "M_bar": 1, "T_grid": [3000]},
    "fig4": {"mode": "crossval", "d": 10, "M_bar": 2, "T_grid": [4000]},
}
FIGURE_GRAPHS = ("ring", "line")

# never published, always reported as artifact choices
ARTIFACT_CHOICES = ["burn_in", "z_dist", "initial_state"]
