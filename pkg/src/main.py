#!/usr/bin/env python3
# coding: utf-8

# pim-recovery - main.py
# Single entry point: python src/main.py <subcommand> [flags]

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict
from pathlib import Path

import pandas as pd

from bounds import READINGS, BoundInputs, inputs_from_graph, theorem1_sample_size
from config import (
    BURN_IN,
    DEFAULT_KAPPA,
    DEFAULT_SEED,
    ENABLE_TRIAL_CACHE,
    FIGURE_GRAPHS,
    FIGURES,
    PRESET_BETA,
    PRESET_NODE,
    PRESET_NODES,
    PRESET_SCHEDULE,
    RESULTS_DIR,
    TRIALS,
    VERSION,
    CliText,
)
from engine import RECOVERY_MAP, recover_graph
from entropy import PAIRING_MODES
from experiments import (
    apply_overrides,
    crossval_kappa,
    figure_config,
    load_config,
    parse_config,
    run_experiment,
    run_figure,
    summarize,
    trend_test,
    write_meta,
    write_table,
)
from graph import NodeParams, load_graph, make_graph, save_graph, validate
from simulator import PimParams, load_trajectory, reset_count, save_trajectory, simulate
from simulator.pim import Z_DISTRIBUTIONS
from utils import table_fmt, timeof_fmt
from utils.errors import EXIT_OK, ValidationError, exit_code_for

DEFAULT_BOUND_INPUTS = {"M_bar": 1, "V_size": PRESET_NODES, "gamma": 0.1, "epsilon": 0.2, "epsilon_prime": 0.2}


def _out_path(value: str | None, default_name: str) -> Path:
    return Path(value) if value else Path(RESULTS_DIR) / default_name


def cmd_graph(args) -> int:
    node = NodeParams(alpha=args.alpha, l=args.l, mu_slope=args.mu_slope, zbar=args.zbar)
    g = make_graph(args.kind, args.n, node, in_degree=args.in_degree, seed=args.seed)
    violations = validate(g)
    if violations:
        print(f"{args.kind}({args.n}): {len(violations)} violation(s)")
        for v in violations:
            print(f"  - {v}")
        raise ValidationError(violations)
    path = save_graph(g, _out_path(args.out, f"{args.kind}{args.n}.json"))
    print(f"{args.kind}({args.n}): {len(g.edges)} edges, valid -> {path}")
    return EXIT_OK


def _pim_from_args(args) -> PimParams:
    alpha_exp = beta1 = None
    if args.p is None and not args.no_resets:
        alpha_exp = args.alpha_exp if args.alpha_exp is not None else PRESET_SCHEDULE["alpha_exp"]
        beta1 = args.beta1 if args.beta1 is not None else PRESET_SCHEDULE["beta1"]
    elif args.p is not None:
        alpha_exp, beta1 = args.alpha_exp, args.beta1
    return PimParams(
        d=args.d, p=args.p, alpha_exp=alpha_exp, beta1=beta1, beta=args.beta, M_bar=args.mbar, T=args.T,
        burn_in=args.burn_in, seed=args.seed, z_dist=args.z_dist, resets_enabled=not args.no_resets,
    )


def cmd_simulate(args) -> int:
    g = load_graph(args.graph)
    params = _pim_from_args(args)
    traj = simulate(g, params, progress=args.progress)
    written = save_trajectory(traj, _out_path(args.out, "trajectory.jsonl"), with_hidden=args.with_hidden)
    print(f"T={traj.T} nodes={traj.node_count} resets={reset_count(traj)} -> {', '.join(map(str, written))}")
    return EXIT_OK


def cmd_recover(args) -> int:
    traj = load_trajectory(args.traj, with_hidden=True if args.pairing == "genie" else None)
    est = recover_graph(traj, args.kappa, args.max_set, pairing=args.pairing, engine=args.engine,
                        progress=args.progress)
    path = est.save(_out_path(args.out, "recovered.json"))
    if args.trace:
        est.save_trace(args.trace)
    edges = sorted(est.edge_set())
    print(f"kappa={args.kappa:g} engine={args.engine} edges={len(edges)} converged={est.converged} -> {path}")
    if edges:
        print("  " + " ".join(f"{u}->{v}" for u, v in edges))
    return EXIT_OK


def _experiment_config(args):
    if getattr(args, "figure", None):
        cfg = figure_config(args.figure, args.graph_kind)
    elif args.config:
        cfg = load_config(args.config)
    else:
        cfg = parse_config({})
    return apply_overrides(
        cfg,
        T_grid=args.T_grid,
        kappa_grid=args.kappa_grid,
        trials=args.trials,
        seed_base=args.seed_base,
        max_set=args.max_set,
        record_runtime=False if args.no_timing else None,
    )


def cmd_experiment(args) -> int:
    use_cache = args.cache or bool(ENABLE_TRIAL_CACHE)
    if args.plot_data:
        out_dir = Path(args.out) if args.out else Path(RESULTS_DIR)
        for name in FIGURES:
            path = run_figure(name, out_dir, trials=args.trials or TRIALS,
                              seed_base=args.seed_base if args.seed_base is not None else DEFAULT_SEED,
                              jobs=args.jobs, use_cache=use_cache, progress=args.progress,
                              record_runtime=not args.no_timing)
            print(f"{name}: {', '.join(FIGURE_GRAPHS)} -> {path}")
        return EXIT_OK

    cfg = _experiment_config(args)
    start = time.monotonic()
    table = run_experiment(cfg, jobs=args.jobs, use_cache=use_cache, progress=args.progress)
    written = write_table(table, _out_path(args.out, "experiment.csv"), cfg)
    summary = summarize(table)
    print(summary[["T", "kappa", "trials", "skipped", "mean_exact"]].to_string(index=False))
    if table.completed["T"].nunique() >= 2:
        rho, pvalue = trend_test(table)
        print(f"trend: spearman rho={rho:.4f} p={pvalue:.4g}")
    print(f"{len(table)} rows in {timeof_fmt(time.monotonic() - start)} -> {written[0]}")
    return EXIT_OK


def cmd_crossval(args) -> int:
    cfg = _experiment_config(args)
    use_cache = args.cache or bool(ENABLE_TRIAL_CACHE)
    best, curve = crossval_kappa(cfg, jobs=args.jobs, use_cache=use_cache, progress=args.progress)
    frame = pd.DataFrame({"kappa": curve.index.astype(float), "mean_exact": curve.to_numpy()})
    frame["best"] = (frame["kappa"] == best).astype(int)
    path = _out_path(args.out, "crossval.csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    write_meta(path, cfg, {"best_kappa": best})
    print(frame.to_string(index=False))
    print(f"best kappa={best:g} -> {path}")
    return EXIT_OK


BOUND_FLAGS = {
    "mbar": "M_bar", "v": "V_size", "gamma": "gamma", "epsilon": "epsilon", "epsilon_prime": "epsilon_prime",
    "delta": "delta", "delta_prime": "delta_prime", "c": "c", "c1": "c1", "alpha_exp": "alpha_exp",
    "beta1": "beta1", "d": "d", "mu_bar": "mu_bar", "L": "L", "rho": "rho",
}


def cmd_bound(args) -> int:
    given = {field: getattr(args, flag) for flag, field in BOUND_FLAGS.items() if getattr(args, flag) is not None}
    if args.graph:
        g = load_graph(args.graph)
        values = {k: v for k, v in DEFAULT_BOUND_INPUTS.items() if k != "V_size"}
        values.update(given)
        b = inputs_from_graph(g, **values)
    else:
        b = BoundInputs(**{**DEFAULT_BOUND_INPUTS, **given})
    result = theorem1_sample_size(b, reading=args.reading)
    report = {"version": VERSION, "inputs": asdict(b), "result": result.to_dict()}

    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        rows = [(k, v) for k, v in asdict(b).items()]
        rows += [
            ("|chi|", result.chi),
            ("|P|max", result.pmax),
            ("|xi|", f"{result.xi}{' (unbounded)' if result.xi_unbounded else ''}"),
            ("delta used", result.delta),
            ("delta' used", result.delta_prime),
            ("mixing value", result.mixing_value),
            ("reset term", result.term_reset),
            (f"concentration term ({result.reading})", result.term_concentration),
            ("status", result.status),
            ("T_required", result.T_required if result.T_required is not None else "n/a"),
        ]
        rows += [(f"check {name}", ok) for name, ok in result.checks.items()]
        print(table_fmt(rows, CliText.bound_header))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="output path (default under RESULTS_DIR)")


def _add_grid_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--T-grid", dest="T_grid", type=int, nargs="+", help="override T_grid")
    p.add_argument("--kappa-grid", dest="kappa_grid", type=float, nargs="+", help="override kappa_grid")
    p.add_argument("--trials", type=int, help="override trials per cell")
    p.add_argument("--seed-base", dest="seed_base", type=int, help="override seed_base")
    p.add_argument("--max-set", dest="max_set", type=int, help="override the conditioning-set cap")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: WORKERS or CPU count)")
    p.add_argument("--cache", action="store_true", help="reuse finished cells from the trial cache")
    p.add_argument("--no-timing", dest="no_timing", action="store_true",
                   help="record runtime_ms as 0 so repeated runs are byte-identical")
    _add_common(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pim-recovery",
        description=CliText.description,
        epilog=CliText.epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--quiet", action="store_true", help="no progress counters, warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="generate an influence graph")
    p.add_argument("kind", choices=["ring", "line", "random"])
    p.add_argument("--n", type=int, default=PRESET_NODES)
    p.add_argument("--in-degree", dest="in_degree", type=int, default=2, help="random graphs only")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random graphs only")
    p.add_argument("--alpha", type=float, default=PRESET_NODE["alpha"])
    p.add_argument("--l", type=float, default=PRESET_NODE["l"])
    p.add_argument("--mu-slope", dest="mu_slope", type=float, default=PRESET_NODE["mu_slope"])
    p.add_argument("--zbar", type=float, default=PRESET_NODE["zbar"])
    _add_common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("simulate", help="run the dynamics on a graph")
    p.add_argument("--graph", required=True, help="graph JSON")
    p.add_argument("--d", type=int, default=5, help="reset depth")
    p.add_argument("--p", type=float, default=None, help="explicit head probability")
    p.add_argument("--alpha-exp", dest="alpha_exp", type=float, default=None)
    p.add_argument("--beta1", type=float, default=None)
    p.add_argument("--beta", type=float, default=PRESET_BETA)
    p.add_argument("--mbar", type=int, default=1)
    p.add_argument("--T", type=int, default=3000)
    p.add_argument("--burn-in", dest="burn_in", type=int, default=BURN_IN)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--z-dist", dest="z_dist", choices=Z_DISTRIBUTIONS, default="uniform")
    p.add_argument("--no-resets", dest="no_resets", action="store_true", help="run the chain without resets")
    p.add_argument("--with-hidden", dest="with_hidden", action="store_true", help="also write the hidden sidecar")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("recover", help="recover the influence graph from a trajectory")
    p.add_argument("--traj", required=True, help="trajectory JSON Lines")
    p.add_argument("--kappa", type=float, default=DEFAULT_KAPPA)
    p.add_argument("--max-set", dest="max_set", type=int, default=None)
    p.add_argument("--engine", choices=list(RECOVERY_MAP), default="greedy")
    p.add_argument("--pairing", choices=PAIRING_MODES, default="naive")
    p.add_argument("--trace", help="write the search trace as JSON Lines")
    _add_common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("experiment", help="seeded trials over the T and kappa grids")
    _add_grid_flags(p)
    p.add_argument("--plot-data", dest="plot_data", action="store_true", help="emit fig1.csv..fig4.csv")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("crossval", help="choose kappa by cross-validation")
    _add_grid_flags(p)
    p.add_argument("--figure", choices=[f for f, v in FIGURES.items() if v["mode"] == "crossval"],
                   help="use a published cross-validation setting instead of --config")
    p.add_argument("--graph-kind", dest="graph_kind", choices=FIGURE_GRAPHS, default="ring")
    p.set_defaults(func=cmd_crossval)

    p = sub.add_parser("bound", help="evaluate the sample-size bound")
    p.add_argument("--mbar", type=int)
    p.add_argument("--v", type=int, help="|V|")
    p.add_argument("--d", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--epsilon-prime", dest="epsilon_prime", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--delta-prime", dest="delta_prime", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--c1", type=float)
    p.add_argument("--alpha-exp", dest="alpha_exp", type=float)
    p.add_argument("--beta1", type=float)
    p.add_argument("--mu-bar", dest="mu_bar", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--graph", help="take |V|, mu_bar, L and rho from a graph JSON")
    p.add_argument("--reading", choices=READINGS, default="printed")
    p.add_argument("--json", action="store_true", help="print JSON instead of the table")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.progress = not args.quiet and sys.stderr.isatty()
    if args.quiet:
        logging.getLogger().setLevel(logging.WARNING)
    try:
        return args.func(args)
    except Exception as e:
        code = exit_code_for(e)
        if code == 1:
            logging.exception("Unexpected failure in %s", args.command)
        print(f"error: {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    if sys.stdout.isatty():
        print(CliText.banner)
    sys.exit(main())
