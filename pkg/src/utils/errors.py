"""Error types shared by every package, and their CLI exit codes."""
import logging
from dataclasses import dataclass, field, fields
from typing import Any, Optional

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INFEASIBLE = 4
EXIT_NONCONVERGENCE = 5


class PimError(Exception):
    """Base class; subclasses pin the exit code the CLI reports."""
    exit_code = EXIT_VALIDATION

    def __post_init__(self):
        # pickling rebuilds dataclass subclasses from args
        Exception.__init__(self, *(getattr(self, f.name) for f in fields(self)))


@dataclass
class ValidationError(PimError):
    """Raised when an object fails its invariants. The violations are kept as data."""
    violations: list[str] = field(default_factory=list)
    what: str = "graph"

    def __str__(self):
        return f"invalid {self.what}: " + "; ".join(self.violations)


@dataclass
class ConfigError(PimError):
    """Schema violation in an experiment config, reported with its dotted field path."""
    path: str
    reason: str

    def __str__(self):
        return f"{self.path}: {self.reason}"


class ParameterError(PimError, ValueError):
    """An argument outside its documented range (size, degree, kappa, ...)."""


class ConstraintError(PimError, ValueError):
    """A side condition of the sample-size bound cannot hold for the given inputs."""


class GuardError(PimError, ValueError):
    """Refused because the combinatorial search would blow up."""


class IncompatibleError(PimError, ValueError):
    """Two objects that must agree (arity, node set) do not."""


class EmptyDistributionError(PimError, ValueError):
    """Entropy of an empty count table."""


@dataclass
class MissingHiddenDataError(PimError):
    """Genie pairing needs the reset coins, which live only in the hidden sidecar."""
    path: Optional[str] = None
    exit_code = EXIT_IO

    def __str__(self):
        if self.path:
            return f"hidden diagnostics not available (expected sidecar {self.path})"
        return "hidden diagnostics not available for this trajectory"


@dataclass
class TrajectoryIOError(PimError):
    path: str
    reason: str
    exit_code = EXIT_IO

    def __str__(self):
        return f"{self.path}: {self.reason}"


@dataclass
class InfeasibleScheduleError(PimError):
    """The reset-probability schedule gives p outside (0, 1] at this T."""
    value: float
    T: int
    d: int
    exit_code = EXIT_INFEASIBLE

    def __str__(self):
        return f"infeasible reset schedule at T={self.T}, d={self.d}: p={self.value:.6g} not in (0, 1]"


@dataclass
class ConvergenceError(PimError):
    """Power iteration did not settle within the iteration cap."""
    last_estimate: float
    iterations: int
    last_iterate: Any = None
    exit_code = EXIT_NONCONVERGENCE

    def __str__(self):
        return f"no convergence after {self.iterations} iterations (last estimate {self.last_estimate:.12g})"


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code.

    Args:
        exc: The exception raised by a subcommand

    Returns:
        One of the EXIT_* codes
    """
    if isinstance(exc, PimError):
        return exc.exit_code
    if isinstance(exc, (FileNotFoundError, PermissionError, IsADirectoryError)):
        return EXIT_IO
    if isinstance(exc, OSError):
        # OSError can be many things, only file-system ones are I/O for us
        logging.debug("Treating OSError errno=%s as I/O failure", getattr(exc, "errno", None))
        return EXIT_IO
    if isinstance(exc, (ValueError, KeyError, TypeError)):
        return EXIT_VALIDATION
    return 1
