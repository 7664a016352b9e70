"""Seeded trial grids over (T, kappa, trial), cross-validation of kappa, and CSV outputs."""
import json
import logging
import math
from dataclasses import dataclass, replace
from multiprocessing import Pool
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from scipy.stats import spearmanr
from tqdm import tqdm

from config import ARTIFACT_CHOICES, FIGURE_GRAPHS, FIGURES, VERSION, WORKERS
from database import TrialCache
from engine import recover_graph
from engine.helper import config_digest, stable_seed, timed
from experiments.config import ExperimentConfig, figure_config
from experiments.metrics import edge_metrics
from simulator import simulate
from utils.errors import InfeasibleScheduleError, ParameterError

COLUMNS = ["T", "kappa", "trial", "exact", "precision", "recall", "hamming", "runtime_ms", "status"]
SORT_KEYS = ["T", "kappa", "trial"]


@dataclass(frozen=True)
class Cell:
    T: int
    kappa_index: int
    kappa: float
    trial: int


@dataclass
class TrialTable:
    frame: pd.DataFrame

    @classmethod
    def from_rows(cls, rows: list[dict]) -> "TrialTable":
        frame = pd.DataFrame(rows, columns=COLUMNS)
        frame = frame.sort_values(SORT_KEYS, kind="mergesort").reset_index(drop=True)
        return cls(frame)

    @property
    def completed(self) -> pd.DataFrame:
        return self.frame[self.frame["status"] != "skipped"]

    def __len__(self) -> int:
        return len(self.frame)


def cell_seed(seed_base: int, cell: Cell) -> int:
    return stable_seed(seed_base, cell.T, cell.kappa_index, cell.trial)


def _cells(cfg: ExperimentConfig) -> list[Cell]:
    return [
        Cell(T, k_idx, kappa, trial)
        for T in cfg.T_grid
        for k_idx, kappa in enumerate(cfg.kappa_grid)
        for trial in range(cfg.trials)
    ]


def _cell_key(identity: str, cell: Cell) -> str:
    return config_digest([identity, cell.T, cell.kappa_index, cell.kappa, cell.trial])


@timed
def _recover(traj, kappa, max_set):
    return recover_graph(traj, kappa, max_set)


def run_cell(cfg: ExperimentConfig, cell: Cell) -> dict:
    """Simulate, recover and score one grid cell; an infeasible schedule gives a skipped row."""
    row = {"T": cell.T, "kappa": cell.kappa, "trial": cell.trial}
    truth = cfg.graph.build()
    params = replace(cfg.pim, T=cell.T, seed=cell_seed(cfg.seed_base, cell))
    try:
        traj = simulate(truth, params)
    except InfeasibleScheduleError as e:
        logging.info("Skipping T=%d kappa=%g trial=%d: %s", cell.T, cell.kappa, cell.trial, e)
        return {**row, "exact": None, "precision": None, "recall": None, "hamming": None,
                "runtime_ms": None, "status": "skipped"}
    est, elapsed = _recover(traj, cell.kappa, cfg.max_set)
    metrics = edge_metrics(truth, est)
    return {
        **row,
        "exact": int(metrics.exact),
        "precision": metrics.precision,
        "recall": metrics.recall,
        "hamming": metrics.hamming,
        "runtime_ms": round(elapsed, 3) if cfg.record_runtime else 0.0,
        "status": "ok" if est.converged else "size-cap",
    }


def _run_cell_task(task: tuple[ExperimentConfig, Cell]) -> dict:
    return run_cell(*task)


def run_experiment(cfg: ExperimentConfig, jobs: Optional[int] = None, use_cache: bool = False,
                   progress: bool = False) -> TrialTable:
    """Run every (T, kappa, trial) cell; the table depends on the config alone.

    Args:
        cfg: Experiment description
        jobs: Worker processes; None uses WORKERS, 1 runs inline
        use_cache: Reuse and store finished cells in the trial cache
        progress: Show a tqdm counter
    """
    jobs = jobs or WORKERS
    cells = _cells(cfg)
    identity = config_digest(cfg.cell_identity())
    cache = TrialCache() if use_cache else None

    rows, pending = [], []
    for cell in cells:
        cached = cache.get_cache(_cell_key(identity, cell)) if cache else {}
        if cached:
            if not cfg.record_runtime and cached["runtime_ms"] is not None:
                cached["runtime_ms"] = 0.0
            rows.append(cached)
        else:
            pending.append(cell)
    logging.info("Running %d cells (%d cached) with %d worker(s)", len(pending), len(rows), jobs)

    tasks = [(cfg, cell) for cell in pending]
    bar = tqdm(total=len(tasks), desc="trials", unit="cell", disable=not progress)
    fresh = []
    if jobs == 1 or len(tasks) <= 1:
        for task in tasks:
            fresh.append(_run_cell_task(task))
            bar.update()
    else:
        with Pool(processes=min(jobs, len(tasks))) as pool:
            for result in pool.imap_unordered(_run_cell_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))):
                fresh.append(result)
                bar.update()
    bar.close()

    if cache:
        by_cell = {(r["T"], r["kappa"], r["trial"]): r for r in fresh}
        for cell in pending:
            cache.add_cache(_cell_key(identity, cell), by_cell[(cell.T, cell.kappa, cell.trial)])
    return TrialTable.from_rows(rows + fresh)


def summarize(table: TrialTable, by: tuple[str, ...] = ("T", "kappa")) -> pd.DataFrame:
    """Mean and standard error per group over completed trials."""
    frame = table.frame.copy()
    frame["skipped"] = (frame["status"] == "skipped").astype(int)
    done = frame[frame["status"] != "skipped"]
    keys = list(by)
    stats = done.groupby(keys).agg(
        trials=("trial", "count"),
        mean_exact=("exact", "mean"),
        stderr_exact=("exact", "sem"),
        mean_precision=("precision", "mean"),
        mean_recall=("recall", "mean"),
        mean_hamming=("hamming", "mean"),
        mean_runtime_ms=("runtime_ms", "mean"),
    )
    skipped = frame.groupby(keys).agg(skipped=("skipped", "sum"))
    return skipped.join(stats, how="left").reset_index()


def crossval_from_table(table: TrialTable) -> tuple[float, pd.Series]:
    done = table.completed
    curve = done.groupby("kappa")["exact"].mean().reindex(sorted(table.frame["kappa"].unique()))
    best, best_score = None, -math.inf
    # ascending kappa + strict comparison: ties go to the smallest kappa
    for kappa, score in curve.items():
        score = -math.inf if pd.isna(score) else score
        if best is None or score > best_score:
            best, best_score = float(kappa), score
    return best, curve


def crossval_kappa(cfg: ExperimentConfig, jobs: Optional[int] = None, use_cache: bool = False,
                   progress: bool = False) -> tuple[float, pd.Series]:
    """Pick the kappa with the highest mean exact recovery on labelled data at a single T."""
    if len(cfg.kappa_grid) < 2:
        raise ParameterError(f"cross-validation needs at least 2 kappa values, got {len(cfg.kappa_grid)}")
    if len(cfg.T_grid) != 1:
        raise ParameterError(f"cross-validation runs at a single T, got T_grid={list(cfg.T_grid)}")
    table = run_experiment(cfg, jobs=jobs, use_cache=use_cache, progress=progress)
    return crossval_from_table(table)


def trend_test(table: TrialTable) -> tuple[float, float]:
    """Spearman rank correlation of T against exact recovery over completed trials."""
    done = table.completed
    if done["T"].nunique() < 2:
        raise ParameterError("trend test needs at least two distinct T values")
    rho, pvalue = spearmanr(done["T"].to_numpy(dtype=float), done["exact"].to_numpy(dtype=float))
    return float(rho), float(pvalue)


def write_meta(csv_path: Path, cfg: ExperimentConfig, extra: Optional[dict] = None) -> Path:
    meta = {
        "version": VERSION,
        "config_hash": config_digest(cfg.to_dict()),
        "config": cfg.to_dict(),
        "artifact_choices": list(cfg.defaulted) + ARTIFACT_CHOICES,
    }
    meta.update(extra or {})
    path = csv_path.with_name(csv_path.name + ".meta.json")
    path.write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n")
    return path


def write_table(table: TrialTable, path: str | Path, cfg: ExperimentConfig) -> list[Path]:
    """Trial CSV, its summary CSV and the metadata sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.frame.to_csv(path, index=False)
    summary_path = path.with_name(path.stem + ".summary.csv")
    summarize(table).to_csv(summary_path, index=False)
    written = [path, summary_path, write_meta(path, cfg)]
    logging.info("Wrote %s", ", ".join(str(p) for p in written))
    return written


def run_figure(name: str, out_dir: str | Path, trials: int, seed_base: int = 0, jobs: Optional[int] = None,
               use_cache: bool = False, progress: bool = False, record_runtime: bool = True) -> Path:
    """Data behind one of the four published figures, ring and line stacked in one CSV."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    frames = []
    last_cfg = None
    for kind in FIGURE_GRAPHS:
        cfg = replace(figure_config(name, kind, trials=trials, seed_base=seed_base), record_runtime=record_runtime)
        table = run_experiment(cfg, jobs=jobs, use_cache=use_cache, progress=progress)
        summary = summarize(table)
        summary.insert(0, "graph", kind)
        if cfg.mode == "crossval":
            best, _ = crossval_from_table(table)
            summary["best"] = np.isclose(summary["kappa"], best).astype(int)
        frames.append(summary)
        last_cfg = cfg
    path = out_dir / f"{name}.csv"
    pd.concat(frames, ignore_index=True).to_csv(path, index=False)
    write_meta(path, last_cfg, {"figure": name, "preset": FIGURES[name], "graphs": list(FIGURE_GRAPHS)})
    return path
