import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))

from graph import NodeParams, make_line, make_ring  # noqa: E402
from simulator import PimParams, Trajectory, replay_effective_index  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run Monte-Carlo acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo checks, run with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def make_copy_trajectory(T: int = 400, seed: int = 0, n: int = 3) -> Trajectory:
    """Node 0 flips fair coins, node 1 copies node 0 one step later, the rest are independent noise."""
    rng = np.random.default_rng(seed)
    N = rng.integers(0, 2, size=(T, n))
    N[1:, 1] = N[:-1, 0]
    M = np.ones_like(N)
    C = np.ones(T, dtype=np.int8)
    return Trajectory(N=N, M=M, X=N.astype(float), C=C, e=replay_effective_index(C, 1), d=1)


@pytest.fixture
def copy_traj() -> Trajectory:
    return make_copy_trajectory()


@pytest.fixture
def preset_node() -> NodeParams:
    return NodeParams(alpha=0.8, l=0.167, mu_slope=0.4, zbar=0.5)


@pytest.fixture
def ring10(preset_node):
    return make_ring(10, preset_node)


@pytest.fixture
def line10(preset_node):
    return make_line(10, preset_node)


@pytest.fixture
def short_params() -> PimParams:
    return PimParams(d=2, p=0.9, T=600, burn_in=50, seed=7)


@pytest.fixture
def trial_cache(tmp_path):
    from database import configure

    configure(f"sqlite:///{tmp_path / 'trials.sqlite3'}")
    yield tmp_path
    configure(f"sqlite:///{tmp_path / 'unused.sqlite3'}")
