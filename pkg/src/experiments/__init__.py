from experiments.config import (
    GRAPH_KINDS,
    MODES,
    ExperimentConfig,
    GraphSpec,
    apply_overrides,
    figure_config,
    load_config,
    parse_config,
)
from experiments.metrics import EdgeMetrics, edge_metrics
from experiments.runner import (
    COLUMNS,
    Cell,
    TrialTable,
    cell_seed,
    crossval_from_table,
    crossval_kappa,
    run_cell,
    run_experiment,
    run_figure,
    summarize,
    trend_test,
    write_meta,
    write_table,
)
