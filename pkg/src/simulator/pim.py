"""Past Influence Model dynamics.

Each step every node v emits M_v(t) Bernoulli(X_v(t)) samples, N_v(t) of them
successes. A global coin C(t) decides whether the next latent state is driven by
the current observables (head) or by the observables d steps back (tail, a
"reset"):

    X_v(t+1) = (1 - alpha_v) [(1 - beta) Z_v(t) + beta l_v]
               + alpha_v sum_{u in N_v + v} a_uv [C(t) Y_u(t) + (1 - C(t)) Y_u(t - d)]
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from tqdm import tqdm

from config import BURN_IN, DEFAULT_SEED
from graph import InfluenceGraph, require_valid
from utils.errors import InfeasibleScheduleError, MissingHiddenDataError, ParameterError, ValidationError

Z_DISTRIBUTIONS = ("uniform", "point", "beta")
BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class PimParams:
    """Simulation parameters.

    The reset law is either an explicit head probability ``p`` or the schedule
    ``(alpha_exp, beta1)`` giving (1 - p) = (T - 1)^alpha_exp / (beta1 (T - d - 1)).
    """
    d: int = 5
    p: Optional[float] = None
    alpha_exp: Optional[float] = None
    beta1: Optional[float] = None
    beta: float = 0.75
    M_bar: int = 1
    T: int = 3000
    burn_in: int = BURN_IN
    seed: int = DEFAULT_SEED
    z_dist: str = "uniform"
    resets_enabled: bool = True

    @property
    def reset_spec(self) -> float | tuple[float, float]:
        if self.p is not None:
            return self.p
        return self.alpha_exp, self.beta1

    def violations(self) -> list[str]:
        found = []
        if self.d < 1:
            found.append(f"d={self.d} must be >= 1")
        if self.T < 1:
            found.append(f"T={self.T} must be >= 1")
        if self.resets_enabled and self.T < self.d + 2:
            found.append(f"T={self.T} must be >= d + 2 = {self.d + 2} when resets are enabled")
        if self.M_bar < 0:
            found.append(f"M_bar={self.M_bar} must be >= 0")
        if not 0 < self.beta < 1:
            found.append(f"beta={self.beta} outside (0, 1)")
        if self.burn_in < 0:
            found.append(f"burn_in={self.burn_in} must be >= 0")
        if self.z_dist not in Z_DISTRIBUTIONS:
            found.append(f"z_dist={self.z_dist!r} not one of {', '.join(Z_DISTRIBUTIONS)}")
        if self.resets_enabled:
            has_schedule = self.alpha_exp is not None or self.beta1 is not None
            if self.p is None and not has_schedule:
                found.append("reset law missing: give p or (alpha_exp, beta1)")
            elif self.p is not None and has_schedule:
                found.append("give either p or (alpha_exp, beta1), not both")
        return found

    def check(self) -> "PimParams":
        found = self.violations()
        if found:
            raise ValidationError(found, what="simulation parameters")
        return self

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Observed counts plus the hidden diagnostics of the kept window.

    ``N`` and ``M`` have shape (T, |V|). ``X``, ``C`` and ``e`` are None when the
    trajectory was loaded without its sidecar.
    """
    N: np.ndarray
    M: np.ndarray
    X: Optional[np.ndarray] = None
    C: Optional[np.ndarray] = None
    e: Optional[np.ndarray] = None
    d: Optional[int] = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def T(self) -> int:
        return self.N.shape[0]

    @property
    def node_count(self) -> int:
        return self.N.shape[1]

    @property
    def has_hidden(self) -> bool:
        return self.C is not None and self.d is not None

    @property
    def Y(self) -> np.ndarray:
        """Observables as floats; symbol tables never use this."""
        return self.N / self.M

    def require_hidden(self, path: Optional[str] = None) -> "Trajectory":
        if not self.has_hidden:
            raise MissingHiddenDataError(path or self.meta.get("hidden_path"))
        return self


def resolve_reset_probability(spec: float | tuple[float, float], T: int, d: int) -> float:
    """Head probability p for this horizon.

    Args:
        spec: Explicit p, or the schedule pair (alpha_exp, beta1)
        T: Number of observed steps
        d: Reset depth

    Returns:
        p in (0, 1]; an explicit p = 0 is accepted as the all-tails regime

    Raises:
        InfeasibleScheduleError: When the schedule lands outside (0, 1]
    """
    if T <= d + 1:
        raise ParameterError(f"T={T} must exceed d + 1 = {d + 1}")
    if not isinstance(spec, tuple):
        p = float(spec)
        if not 0 <= p <= 1:
            raise ParameterError(f"reset probability p={p} outside [0, 1]")
        return p

    alpha_exp, beta1 = spec
    if alpha_exp is None or beta1 is None:
        raise ParameterError("reset schedule needs both alpha_exp and beta1")
    if not alpha_exp < 1:
        raise ParameterError(f"alpha_exp={alpha_exp} must be < 1")
    if not 0 < beta1 < 1:
        raise ParameterError(f"beta1={beta1} outside (0, 1)")
    p = 1 - (T - 1) ** alpha_exp / (beta1 * (T - d - 1))
    if not 0 < p <= 1:
        raise InfeasibleScheduleError(p, T, d)
    return p


def sample_M(x: float | np.ndarray, mu_slope: float | np.ndarray, M_bar: int,
             rng: np.random.Generator) -> int | np.ndarray:
    """1 + min(Poisson(mu_slope * x), M_bar), elementwise for arrays."""
    m = np.minimum(rng.poisson(np.multiply(mu_slope, x)), M_bar) + 1
    return int(m) if np.ndim(m) == 0 else m


def replay_effective_index(coins: np.ndarray, d: int) -> np.ndarray:
    """Genie time index of each sample, rebuilt from the coin sequence."""
    coins = np.asarray(coins)
    e = np.zeros(len(coins), dtype=np.int64)
    for t in range(len(coins) - 1):
        if coins[t]:
            e[t + 1] = e[t] + 1
        else:
            e[t + 1] = e[t - d] + 1
    return e


def _draw_fluctuation(z_dist: str, zbar: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if z_dist == "uniform":
        return rng.random(len(zbar))
    if z_dist == "point":
        return zbar
    return rng.beta(2 * zbar, 2 * (1 - zbar))


def simulate(g: InfluenceGraph, params: PimParams, progress: bool = False) -> Trajectory:
    """Run the dynamics for burn_in + T steps and keep the last T.

    The kept window starts a fresh clock: coins are forced to heads for its first
    d + 1 steps, so every sample in the window has its generating parent inside it.
    """
    require_valid(g, allow_degenerate=True)
    params.check()
    n, d = g.node_count, params.d
    p = resolve_reset_probability(params.reset_spec, params.T, d) if params.resets_enabled else 1.0

    # independent substreams: changing M_bar or z_dist never perturbs the coins
    init_rng, coin_rng, fluct_rng, poisson_rng, binom_rng = (
        np.random.default_rng(s) for s in np.random.SeedSequence(params.seed).spawn(5)
    )

    weights = g.weight_matrix()
    alpha = np.array([q.alpha for q in g.params])
    bias = np.array([q.l for q in g.params])
    slope = np.array([q.mu_slope for q in g.params])
    zbar = np.array([q.zbar for q in g.params])

    total = params.burn_in + params.T
    N = np.zeros((total, n), dtype=np.int64)
    M = np.zeros((total, n), dtype=np.int64)
    X = np.zeros((total, n))
    C = np.ones(total, dtype=np.int8)

    x = init_rng.random(n)
    for s in tqdm(range(total), desc="simulate", unit="step", disable=not progress):
        X[s] = x
        M[s] = sample_M(x, slope, params.M_bar, poisson_rng)
        N[s] = binom_rng.binomial(M[s], x)

        clock = s - params.burn_in if s >= params.burn_in else s
        heads = coin_rng.random() < p
        if clock >= d + 1 and not heads:
            C[s] = 0
            drive = N[s - d] / M[s - d]
        else:
            drive = N[s] / M[s]

        z = _draw_fluctuation(params.z_dist, zbar, fluct_rng)
        x = (1 - alpha) * ((1 - params.beta) * z + params.beta * bias) + alpha * (drive @ weights)
        if np.any(x < -BOUND_SLACK) or np.any(x > 1 + BOUND_SLACK):
            raise AssertionError(f"latent state left [0, 1] at step {s}: {x}")
        x = np.clip(x, 0.0, 1.0)

    window = slice(params.burn_in, total)
    coins = C[window].copy()
    traj = Trajectory(
        N=N[window].copy(),
        M=M[window].copy(),
        X=X[window].copy(),
        C=coins,
        e=replay_effective_index(coins, d),
        d=d,
        meta={"p": p, "params": params.to_dict()},
    )
    logging.info("Simulated %d steps on %d nodes (p=%.6g, %d resets in window)",
                 params.T, n, p, reset_count(traj))
    return traj


def stationary_mean_estimate(traj: Trajectory, v: int) -> float:
    if traj.T < 1:
        raise ParameterError("empty trajectory")
    return float(np.mean(traj.N[:, v] / traj.M[:, v]))


def reset_count(traj: Trajectory) -> int:
    traj.require_hidden()
    return int(np.sum(traj.C == 0))
