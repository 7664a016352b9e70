"""Closed-form quantities behind the sample-size guarantee of PIMRecGreedy.

Every logarithm is base 2, matching the entropy estimator.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from scipy.optimize import brentq

from config import XI_UNBOUNDED
from entropy.symbols import Symbol, support_symbols
from utils.errors import ConstraintError, ParameterError

READINGS = ("printed", "derived")


def support_size(M_bar: int) -> tuple[int, list[Symbol]]:
    if M_bar < 0:
        raise ParameterError(f"M_bar={M_bar} must be >= 0")
    symbols = support_symbols(M_bar)
    return len(symbols), symbols


def pmax_bound(epsilon_prime: float, M_bar: int) -> int:
    """Largest conditioning-set size the greedy can need: floor(2 log2(|chi| bound) / eps' + 1)."""
    if not epsilon_prime > 0:
        raise ParameterError(f"epsilon_prime={epsilon_prime} must be positive")
    if math.isinf(epsilon_prime):
        return 1
    return math.floor(2 * math.log2(M_bar * (M_bar + 1) / 2 + 2) / epsilon_prime + 1)


def xi_size(M_bar: int, pmax: int) -> tuple[int, bool]:
    """|xi| = |chi|^(2 + pmax), and whether it exceeds the representable range."""
    if pmax < 0:
        raise ParameterError(f"pmax={pmax} must be >= 0")
    chi, _ = support_size(M_bar)
    size = chi ** (2 + pmax)
    return size, size > XI_UNBOUNDED


def t_min(T: int, d: int) -> int:
    """Chain length left after collating the all-tails worst case, floored."""
    if T < 1 or d < 1:
        raise ParameterError(f"t_min needs T >= 1 and d >= 1, got T={T}, d={d}")
    return (T + d * d - 1) // (d + 1)


def mixing_condition(mu_bar: float, L: float, rho: float) -> tuple[float, bool]:
    if min(mu_bar, L, rho) < 0:
        raise ParameterError(f"mixing inputs must be nonnegative: mu_bar={mu_bar}, L={L}, rho={rho}")
    value = 2 * (mu_bar + L) * rho
    return value, value < 1


def l1_entropy_slack(delta: float, xi: float) -> float:
    """delta log2(|xi| / delta), the entropy error an L1 error of delta can cause."""
    return delta * math.log2(xi / delta)


def max_l1_target(xi: float, epsilon: float) -> float:
    """Largest delta in (0, |xi|/e] with delta log2(|xi| / delta) <= epsilon / 4."""
    if not epsilon > 0:
        raise ParameterError(f"epsilon={epsilon} must be positive")
    target = epsilon / 4
    upper = xi / math.e
    # the slack increases on (0, |xi|/e]
    if l1_entropy_slack(upper, xi) <= target:
        return upper
    root = brentq(lambda x: l1_entropy_slack(x, xi) - target, 1e-300, upper, xtol=1e-300, rtol=1e-13)
    while l1_entropy_slack(root, xi) > target:
        root = math.nextafter(root, 0.0)
    return root


def _pow2(exponent: float) -> float:
    return math.inf if exponent > 1023 else 2.0**exponent


def reset_tail_bound(T: int, delta_prime: float, beta1: float, c1: float, c: float) -> float:
    """Chance that tails alone push the naive estimate more than delta' from the genie one."""
    return c * _pow2(-T * c1**2 / (12 * delta_prime * beta1))


def w_chain_tail_bound(T: int, d: int, delta: float, xi: float, V_size: int, pmax: int, mix: float) -> float:
    """Union bound over all conditioning sets for the no-reset chain, at the collated length."""
    if not 0 <= mix < 1:
        return math.inf
    exponent = 2 * (1 - mix) * (t_min(T, d) - 1) * delta**2 / ((1 + mix) * xi**2)
    log_prefactor = 1 + (pmax + 1) * math.log2(V_size) + math.log2(xi)
    return _pow2(log_prefactor - exponent)


@dataclass(frozen=True)
class BoundInputs:
    M_bar: int
    V_size: int
    gamma: float
    epsilon: float
    epsilon_prime: float
    delta: Optional[float] = None
    delta_prime: Optional[float] = None
    c: float = 1.0
    c1: float = 0.01
    alpha_exp: float = 0.5
    beta1: float = 0.75
    d: int = 5
    mu_bar: float = 0.4
    L: float = 0.4
    rho: float = 0.8

    def check(self):
        problems = []
        if self.M_bar < 0:
            problems.append(f"M_bar={self.M_bar} must be >= 0")
        if self.V_size < 2:
            problems.append(f"V_size={self.V_size} must be >= 2")
        if not 0 < self.gamma < 1:
            problems.append(f"gamma={self.gamma} outside (0, 1)")
        if not (self.epsilon > 0 and self.epsilon_prime > 0):
            problems.append("epsilon and epsilon_prime must be positive")
        if not (self.c > 0 and self.c1 > 0):
            problems.append("c and c1 must be positive")
        if not self.alpha_exp < 1:
            problems.append(f"alpha_exp={self.alpha_exp} must be < 1")
        if not 0 < self.beta1 < 1:
            problems.append(f"beta1={self.beta1} outside (0, 1)")
        if self.d < 1:
            problems.append(f"d={self.d} must be >= 1")
        for name in ("delta", "delta_prime"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                problems.append(f"{name}={value} must be positive")
        if problems:
            raise ParameterError("; ".join(problems))


@dataclass
class BoundResult:
    status: str  # ok | condition-violated
    T_required: Optional[int]
    term_concentration: float
    term_reset: float
    mixing_value: float
    chi: int
    pmax: int
    xi: int
    xi_unbounded: bool
    delta: float
    delta_prime: float
    log_term: float
    reading: str = "printed"
    checks: dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        # |xi| can exceed what JSON readers hold as a number
        out["xi"] = str(self.xi) if self.xi_unbounded else self.xi
        return out


def schedule_head_probability(T: int, d: int, alpha_exp: float, beta1: float) -> float:
    return 1 - (T - 1) ** alpha_exp / (beta1 * (T - d - 1))


def schedule_margin(T: int, delta_prime: float, alpha_exp: float, beta1: float) -> float:
    """beta1 delta' - 4 (T - 1)^(alpha - 1); must exceed c1."""
    return beta1 * delta_prime - 4 * (T - 1) ** (alpha_exp - 1)


def _smallest_satisfying(start: int, holds: Callable[[int], bool], what: str) -> int:
    """Smallest integer T >= start with holds(T), for a condition that stays true once true."""
    if holds(start):
        return start
    lo, hi = start, max(2 * start, start + 1)
    while not holds(hi):
        lo, hi = hi, 2 * hi
        if hi > XI_UNBOUNDED:
            raise ConstraintError(f"{what} never holds")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def concentration_term(d: int, delta: float, xi: float, mix: float, log_term: float, reading: str) -> float:
    """The Markov-concentration branch of the sample-size requirement.

    printed: (d^2 - d + 2) + (1 - m) delta^2 / (2 (1 + m) |xi|^2 (d + 1)^-1) * log_term
    derived: (d + 1) (1 + 2 (1 + m) |xi|^2 log_term / ((1 - m) delta^2)) - d^2 + 1,
             the T at which the collated chain length meets the concentration bound
    with m the mixing value 2 (mu_bar + L) rho.
    """
    if reading == "printed":
        return (d * d - d + 2) + (1 - mix) * delta**2 / (2 * (1 + mix) * xi**2 * (d + 1) ** -1) * log_term
    if mix >= 1:
        return math.inf
    return (d + 1) * (1 + 2 * (1 + mix) * xi**2 * log_term / ((1 - mix) * delta**2)) - d * d + 1


def theorem1_sample_size(b: BoundInputs, reading: str = "printed") -> BoundResult:
    """Sample size after which recovery succeeds with probability at least 1 - gamma.

    Raises:
        ConstraintError: When delta, delta' cannot meet their entropy targets, or the
            schedule margin can never exceed c1
    """
    if reading not in READINGS:
        raise ParameterError(f"reading {reading!r} not one of {', '.join(READINGS)}")
    b.check()
    chi, _ = support_size(b.M_bar)
    pmax = pmax_bound(b.epsilon_prime, b.M_bar)
    xi, unbounded = xi_size(b.M_bar, pmax)
    xi_f = float(xi) if xi < 2**1000 else math.inf
    if math.isinf(xi_f):
        raise ConstraintError(f"|xi| = {chi}^{2 + pmax} is beyond floating-point range")

    delta = b.delta if b.delta is not None else max_l1_target(xi_f, b.epsilon)
    delta_prime = b.delta_prime if b.delta_prime is not None else max_l1_target(xi_f, b.epsilon_prime)
    for name, value, eps in (("delta", delta, b.epsilon), ("delta'", delta_prime, b.epsilon_prime)):
        if value > xi_f / math.e:
            raise ConstraintError(f"{name}={value:.6g} exceeds |xi|/e = {xi_f / math.e:.6g}")
        slack = l1_entropy_slack(value, xi_f)
        if slack > eps / 4:
            raise ConstraintError(f"{name}*log2(|xi|/{name}) = {slack:.6g} > eps/4 = {eps / 4:.6g}")

    mix, mixing_ok = mixing_condition(b.mu_bar, b.L, b.rho)
    log_term = math.log2((b.c + 2 * b.V_size ** (pmax + 1) * xi_f) / b.gamma)
    term_reset = log_term * 12 * delta_prime * b.beta1 / b.c1**2
    term_conc = concentration_term(b.d, delta, xi_f, mix, log_term, reading)

    result = BoundResult(
        status="ok", T_required=None, term_concentration=term_conc, term_reset=term_reset,
        mixing_value=mix, chi=chi, pmax=pmax, xi=xi, xi_unbounded=unbounded,
        delta=delta, delta_prime=delta_prime, log_term=log_term, reading=reading,
    )
    if not mixing_ok:
        logging.warning("Mixing condition violated: 2(mu_bar+L)rho = %.6g >= 1", mix)
        result.status = "condition-violated"
        result.checks = {"mixing": False}
        return result

    if not b.beta1 * delta_prime > b.c1:
        raise ConstraintError(
            f"beta1*delta' = {b.beta1 * delta_prime:.6g} <= c1 = {b.c1}: schedule margin can never exceed c1"
        )

    def side_conditions(T: int) -> bool:
        return (T > b.d + 1
                and 0 < schedule_head_probability(T, b.d, b.alpha_exp, b.beta1) <= 1
                and schedule_margin(T, delta_prime, b.alpha_exp, b.beta1) > b.c1)

    T_terms = max(math.ceil(max(term_reset, term_conc)), b.d + 2)
    T_required = _smallest_satisfying(T_terms, side_conditions, "schedule side condition")
    result.T_required = T_required
    result.checks = verify_closure(b, result)
    logging.info("Sample-size bound: T >= %d (terms %.6g, %.6g)", T_required, term_reset, term_conc)
    return result


def verify_closure(b: BoundInputs, result: BoundResult) -> dict[str, bool]:
    """Re-check every side condition at the returned T."""
    T = result.T_required
    xi = float(result.xi)
    p = schedule_head_probability(T, b.d, b.alpha_exp, b.beta1)
    return {
        "mixing": result.mixing_value < 1,
        "delta_target": l1_entropy_slack(result.delta, xi) <= b.epsilon / 4,
        "delta_prime_target": l1_entropy_slack(result.delta_prime, xi) <= b.epsilon_prime / 4,
        "covers_reset_term": T >= result.term_reset,
        "covers_concentration_term": T >= result.term_concentration,
        "schedule_feasible": 0 < p <= 1,
        "schedule_margin": schedule_margin(T, result.delta_prime, b.alpha_exp, b.beta1) > b.c1,
    }
