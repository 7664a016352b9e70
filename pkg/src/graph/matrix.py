import logging
from dataclasses import dataclass

import numpy as np

from config import POWER_ITERATION_MAX_ITER, POWER_ITERATION_TOLERANCE
from utils.errors import ConvergenceError, ParameterError
from graph.model import InfluenceGraph, require_valid


@dataclass(frozen=True)
class InfluenceMatrix:
    """Row u is the influencer, column v the influencee: entries[u, v] = alpha_v * a_uv."""
    entries: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def shape(self):
        return self.entries.shape


def influence_matrix(g: InfluenceGraph) -> InfluenceMatrix:
    require_valid(g)
    alphas = np.array([p.alpha for p in g.params])
    # scale column v by the influencee's openness
    entries = g.weight_matrix() * alphas[np.newaxis, :]
    return InfluenceMatrix(entries)


def spectral_radius(m: InfluenceMatrix | np.ndarray,
                    tol: float = POWER_ITERATION_TOLERANCE,
                    max_iter: int = POWER_ITERATION_MAX_ITER) -> float:
    """Perron root of a nonnegative matrix by power iteration.

    Iterates on the shifted matrix B = A + sI with s the max row sum. B has the
    same Perron vector, a positive diagonal (so periodic patterns such as rings
    do not oscillate), and rho(A) = rho(B) - s.

    Args:
        m: Square nonnegative matrix
        tol: Relative change of the estimate that counts as converged
        max_iter: Iteration cap

    Returns:
        rho(m) as a float

    Raises:
        ConvergenceError: When the estimate is still moving after ``max_iter`` steps
    """
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ParameterError(f"spectral radius needs a square matrix, got shape {a.shape}")
    if np.any(a < 0):
        raise ParameterError("power iteration expects a nonnegative matrix")
    if not a.any():
        return 0.0

    shift = float(a.sum(axis=1).max())
    b = a + shift * np.eye(a.shape[0])
    x = np.ones(a.shape[0]) / np.sqrt(a.shape[0])
    estimate = 0.0
    for i in range(1, max_iter + 1):
        y = b @ x
        new_estimate = float(np.linalg.norm(y))
        x = y / new_estimate
        if abs(new_estimate - estimate) <= tol * new_estimate:
            logging.debug("Power iteration converged after %d steps", i)
            return max(new_estimate - shift, 0.0)
        estimate = new_estimate
    raise ConvergenceError(estimate - shift, max_iter, x)
