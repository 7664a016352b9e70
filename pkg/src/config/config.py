import os

import psutil


def get_env(name: str, default=None):
    val = os.getenv(name, default)
    if val is None:
        return None
    if isinstance(val, str):
        if val.lower() == "true":
            return True
        if val.lower() == "false":
            return False
        if val.isdigit():
            return int(val)
    return val


VERSION = "1.0.0"

# general settings
LOG_LEVEL: str = get_env("LOG_LEVEL", "INFO")
# worker pool for experiment grids; 0 means "one per CPU"
WORKERS: int = get_env("WORKERS", 0) or psutil.cpu_count(logical=True) or 1
DEFAULT_SEED: int = get_env("DEFAULT_SEED", 0)

# simulation settings
BURN_IN: int = get_env("BURN_IN", 200)
TRIALS: int = get_env("TRIALS", 50)

# trial cache settings
DB_DSN = get_env("DB_DSN", "sqlite:///trials.sqlite3")
ENABLE_TRIAL_CACHE = get_env("ENABLE_TRIAL_CACHE", False)

RESULTS_DIR = get_env("RESULTS_DIR", "results")


# For advance users
# Please do not change, if you don't know what these are.
WEIGHT_SUM_TOLERANCE = 1e-9
POWER_ITERATION_TOLERANCE = 1e-10
POWER_ITERATION_MAX_ITER = 10000
# beyond this size the exhaustive oracle is refused
EXHAUSTIVE_MAX_NODES = 12
# |xi| above this is reported as unbounded
XI_UNBOUNDED = 2**62
