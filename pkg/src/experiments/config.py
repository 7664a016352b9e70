"""Experiment configuration: JSON schema, parsing with field paths, figure presets."""
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Optional

from config import (
    BURN_IN,
    DEFAULT_KAPPA,
    DEFAULT_KAPPA_GRID,
    DEFAULT_SEED,
    DEFAULT_T_GRID,
    FIGURES,
    PRESET_BETA,
    PRESET_NODE,
    PRESET_NODES,
    PRESET_SCHEDULE,
    TRIALS,
)
from graph import InfluenceGraph, NodeParams, make_graph
from simulator import PimParams
from simulator.pim import Z_DISTRIBUTIONS
from utils.errors import ConfigError

MODES = ("recovery-vs-T", "crossval")
GRAPH_KINDS = ("ring", "line", "random")


@dataclass(frozen=True)
class GraphSpec:
    kind: str = "ring"
    n: int = PRESET_NODES
    node: NodeParams = NodeParams()
    in_degree: int = 2
    seed: int = 0

    def build(self) -> InfluenceGraph:
        return make_graph(self.kind, self.n, self.node, in_degree=self.in_degree, seed=self.seed)


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GraphSpec = GraphSpec()
    pim: PimParams = PimParams()
    T_grid: tuple[int, ...] = tuple(DEFAULT_T_GRID)
    kappa_grid: tuple[float, ...] = tuple(DEFAULT_KAPPA_GRID)
    trials: int = TRIALS
    seed_base: int = DEFAULT_SEED
    mode: str = "recovery-vs-T"
    max_set: Optional[int] = None
    record_runtime: bool = True
    defaulted: tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("defaulted")
        return out

    def cell_identity(self) -> dict:
        """Everything that shapes a single cell except the grids and trial count."""
        out = self.to_dict()
        for key in ("T_grid", "kappa_grid", "trials", "mode", "record_runtime"):
            out.pop(key)
        out["pim"].pop("T")
        out["pim"].pop("seed")
        return out


def _get(data: dict, key: str, path: str, kind: type | tuple, default: Any = ..., check: Callable = None,
         reason: str = "") -> Any:
    where = f"{path}.{key}" if path else key
    if key not in data:
        if default is ...:
            raise ConfigError(where, "missing required field")
        return default
    value = data[key]
    if value is None and default is None:
        return None
    if isinstance(value, bool) and bool not in (kind if isinstance(kind, tuple) else (kind,)):
        raise ConfigError(where, f"expected {getattr(kind, '__name__', kind)}, got bool")
    if not isinstance(value, kind):
        raise ConfigError(where, f"expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}")
    if check is not None and not check(value):
        raise ConfigError(where, reason)
    return value


def _reject_unknown(data: dict, known: set[str], path: str):
    for key in data:
        if key not in known:
            raise ConfigError(f"{path}.{key}" if path else key, "unknown field")


def _grid(data: dict, key: str, kind: type | tuple, check: Callable, reason: str, default: list) -> tuple:
    values = _get(data, key, "", list, default=list(default))
    if not values:
        raise ConfigError(key, "grid must not be empty")
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, kind) or not check(v):
            raise ConfigError(f"{key}[{i}]", reason)
    return tuple(values)


def _parse_node(data: dict, path: str) -> NodeParams:
    _reject_unknown(data, {"alpha", "l", "mu_slope", "zbar"}, path)
    num = (int, float)
    return NodeParams(
        alpha=_get(data, "alpha", path, num, PRESET_NODE["alpha"], lambda x: 0 < x < 1, "must be in (0, 1)"),
        l=_get(data, "l", path, num, PRESET_NODE["l"], lambda x: 0 <= x <= 1, "must be in [0, 1]"),
        mu_slope=_get(data, "mu_slope", path, num, PRESET_NODE["mu_slope"], lambda x: x >= 0, "must be >= 0"),
        zbar=_get(data, "zbar", path, num, PRESET_NODE["zbar"], lambda x: 0 < x < 1, "must be in (0, 1)"),
    )


def _parse_graph(data: dict) -> GraphSpec:
    path = "graph"
    _reject_unknown(data, {"kind", "n", "node", "in_degree", "seed"}, path)
    kind = _get(data, "kind", path, str, "ring", lambda k: k in GRAPH_KINDS, f"must be one of {', '.join(GRAPH_KINDS)}")
    n = _get(data, "n", path, int, PRESET_NODES, lambda x: x >= 2, "must be >= 2")
    in_degree = _get(data, "in_degree", path, int, 2, lambda x: 1 <= x <= n - 1, f"must be in [1, {n - 1}]")
    node = _parse_node(_get(data, "node", path, dict, {}), f"{path}.node")
    return GraphSpec(kind=kind, n=n, node=node, in_degree=in_degree, seed=_get(data, "seed", path, int, 0))


def _parse_pim(data: dict) -> PimParams:
    path = "pim"
    _reject_unknown(data, {"d", "p", "alpha_exp", "beta1", "beta", "M_bar", "burn_in", "z_dist", "resets_enabled"}, path)
    num = (int, float)
    d = _get(data, "d", path, int, 5, lambda x: x >= 1, "must be >= 1")
    p = _get(data, "p", path, num, None, lambda x: 0 <= x <= 1, "must be in [0, 1]")
    if p is not None and ("alpha_exp" in data or "beta1" in data):
        raise ConfigError(f"{path}.p", "give either p or (alpha_exp, beta1), not both")
    alpha_exp = beta1 = None
    if p is None:
        alpha_exp = _get(data, "alpha_exp", path, num, PRESET_SCHEDULE["alpha_exp"], lambda x: x < 1, "must be < 1")
        beta1 = _get(data, "beta1", path, num, PRESET_SCHEDULE["beta1"], lambda x: 0 < x < 1, "must be in (0, 1)")
    return PimParams(
        d=d,
        p=p,
        alpha_exp=alpha_exp,
        beta1=beta1,
        beta=_get(data, "beta", path, num, PRESET_BETA, lambda x: 0 < x < 1, "must be in (0, 1)"),
        M_bar=_get(data, "M_bar", path, int, 1, lambda x: x >= 0, "must be >= 0"),
        burn_in=_get(data, "burn_in", path, int, BURN_IN, lambda x: x >= 0, "must be >= 0"),
        z_dist=_get(data, "z_dist", path, str, "uniform", lambda z: z in Z_DISTRIBUTIONS,
                    f"must be one of {', '.join(Z_DISTRIBUTIONS)}"),
        resets_enabled=_get(data, "resets_enabled", path, bool, True),
    )


def parse_config(data: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from its JSON form.

    Raises:
        ConfigError: With the dotted path of the first offending field
    """
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    known = {"graph", "pim", "T_grid", "kappa_grid", "trials", "seed_base", "mode", "max_set", "record_runtime"}
    _reject_unknown(data, known, "")
    defaulted = tuple(k for k in ("trials", "T_grid", "kappa_grid") if k not in data)
    cfg = ExperimentConfig(
        graph=_parse_graph(_get(data, "graph", "", dict, {})),
        pim=_parse_pim(_get(data, "pim", "", dict, {})),
        T_grid=_grid(data, "T_grid", int, lambda t: t >= 2, "must be an integer >= 2", DEFAULT_T_GRID),
        kappa_grid=_grid(data, "kappa_grid", (int, float), lambda k: k > 0, "must be a positive number",
                         DEFAULT_KAPPA_GRID),
        trials=_get(data, "trials", "", int, TRIALS, lambda x: x >= 1, "must be >= 1"),
        seed_base=_get(data, "seed_base", "", int, DEFAULT_SEED),
        mode=_get(data, "mode", "", str, "recovery-vs-T", lambda m: m in MODES, f"must be one of {', '.join(MODES)}"),
        max_set=_get(data, "max_set", "", int, None, lambda x: x >= 0, "must be >= 0"),
        record_runtime=_get(data, "record_runtime", "", bool, True),
        defaulted=defaulted,
    )
    return _check_cross_fields(cfg)


def _check_cross_fields(cfg: ExperimentConfig) -> ExperimentConfig:
    for i, T in enumerate(cfg.T_grid):
        if cfg.pim.resets_enabled and T < cfg.pim.d + 2:
            raise ConfigError(f"T_grid[{i}]", f"must be >= pim.d + 2 = {cfg.pim.d + 2}")
    for i, kappa in enumerate(cfg.kappa_grid):
        if not kappa > 0:
            raise ConfigError(f"kappa_grid[{i}]", "must be a positive number")
    if cfg.trials < 1:
        raise ConfigError("trials", "must be >= 1")
    if cfg.max_set is not None and not 0 <= cfg.max_set <= cfg.graph.n - 1:
        raise ConfigError("max_set", f"must be in [0, graph.n - 1 = {cfg.graph.n - 1}]")
    return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(str(path), f"not valid JSON ({e.msg} at line {e.lineno})") from e
    return parse_config(data)


def apply_overrides(cfg: ExperimentConfig, **flags) -> ExperimentConfig:
    """Flags win over file values; None means "not given"."""
    top = {k: v for k, v in flags.items() if v is not None and k in ("T_grid", "kappa_grid", "trials", "seed_base",
                                                                       "mode", "max_set", "record_runtime")}
    for key in ("T_grid", "kappa_grid"):
        if key in top:
            top[key] = tuple(top[key])
    defaulted = tuple(k for k in cfg.defaulted if k not in top)
    return _check_cross_fields(replace(cfg, defaulted=defaulted, **top))


def figure_config(name: str, kind: str, trials: int = TRIALS, seed_base: int = DEFAULT_SEED,
                  kappa_grid: Optional[list[float]] = None) -> ExperimentConfig:
    """Published ring/line setting for one of the four figures."""
    if name not in FIGURES:
        raise ConfigError("figure", f"unknown figure {name!r}, choose from {', '.join(FIGURES)}")
    preset = FIGURES[name]
    node = NodeParams(**{k: PRESET_NODE[k] for k in ("alpha", "l", "mu_slope", "zbar")})
    if kappa_grid is None:
        kappa_grid = DEFAULT_KAPPA_GRID if preset["mode"] == "crossval" else [DEFAULT_KAPPA]
    return ExperimentConfig(
        graph=GraphSpec(kind=kind, n=PRESET_NODES, node=node),
        pim=PimParams(d=preset["d"], M_bar=preset["M_bar"], beta=PRESET_BETA, **PRESET_SCHEDULE),
        T_grid=tuple(preset["T_grid"]),
        kappa_grid=tuple(kappa_grid),
        trials=trials,
        seed_base=seed_base,
        mode=preset["mode"],
        defaulted=("trials", "T_grid", "kappa_grid"),
    )
