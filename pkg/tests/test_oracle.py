import numpy as np
import pytest

from engine import ExhaustiveSearch, exhaustive_neighborhood, gap_profile, genie_gap, recover_neighborhood
from entropy import build_pairs
from graph import NodeParams, make_line, make_random, make_ring
from simulator import PimParams, Trajectory, simulate
from utils.errors import GuardError, MissingHiddenDataError, ParameterError

PRESET = NodeParams(alpha=0.8, l=0.167, mu_slope=0.4, zbar=0.5)


def test_independent_dataset_gives_empty_set():
    rng = np.random.default_rng(1)
    N = rng.integers(0, 2, size=(5000, 3))
    traj = Trajectory(N=N, M=np.ones_like(N))
    assert exhaustive_neighborhood(traj, build_pairs(traj), 0, 0.5, max_size=2) == set()


def test_copy_node_oracle(copy_traj):
    pairs = build_pairs(copy_traj)
    assert exhaustive_neighborhood(copy_traj, pairs, 1, 0.5, max_size=2) == {0}
    assert exhaustive_neighborhood(copy_traj, pairs, 1, 0.5, max_size=0) is None


def test_oracle_result_flags(copy_traj):
    pairs = build_pairs(copy_traj)
    result = recover_neighborhood(copy_traj, pairs, 1, 0.5, max_set=0, engine="exhaustive")
    assert not result.converged
    assert result.neighbors == frozenset()


def test_guard_on_large_graphs():
    N = np.zeros((10, 13), dtype=int)
    traj = Trajectory(N=N, M=np.ones_like(N))
    with pytest.raises(GuardError):
        ExhaustiveSearch(traj, build_pairs(traj), 0, 0.5, 2)


def test_oracle_ring_singletons():
    g = make_ring(4, PRESET)
    traj = simulate(g, PimParams(d=2, p=1.0, T=10_000, seed=12))
    pairs = build_pairs(traj)
    for v in range(4):
        assert exhaustive_neighborhood(traj, pairs, v, 0.1, max_size=3) == {(v - 1) % 4}


def test_genie_gap_without_resets(copy_traj):
    naive, genie = genie_gap(copy_traj, 1, 0)
    assert naive == genie
    assert genie > 0.9


def test_genie_gap_errors(copy_traj):
    with pytest.raises(ParameterError):
        genie_gap(copy_traj, 1, 1)
    with pytest.raises(ParameterError):
        genie_gap(copy_traj, 1, 0, {0})
    bare = Trajectory(N=copy_traj.N, M=copy_traj.M)
    with pytest.raises(MissingHiddenDataError):
        genie_gap(bare, 1, 0)


def test_gap_profile_shape():
    g = make_ring(4, PRESET)
    traj = simulate(g, PimParams(d=2, p=0.9, T=4000, seed=2))
    profile = gap_profile(traj, 1, g.in_neighbors(1))
    assert set(profile) == {0, 2, 3}
    naive, genie = profile[0]
    assert genie > 0.1
    assert all(value >= 0 for pair in profile.values() for value in pair)


@pytest.mark.slow
def test_gap_separation_on_ring():
    g = make_ring(4, PRESET)
    quiet, loud = 0, 0
    for seed in range(20):
        traj = simulate(g, PimParams(d=2, p=1.0, T=100_000, seed=seed))
        profile = gap_profile(traj, 0, g.in_neighbors(0))
        quiet += all(profile[u][1] < 0.02 for u in (1, 2))
        loud += profile[3][1] > 0.1
    assert quiet >= 19
    assert loud == 20


@pytest.mark.slow
def test_naive_gap_approaches_genie_gap():
    g = make_ring(4, PRESET)
    distortion = []
    for p in (0.8, 0.9, 0.99, 1.0):
        traj = simulate(g, PimParams(d=2, p=p, T=100_000, seed=4))
        naive, genie = genie_gap(traj, 0, 3)
        distortion.append(abs(naive - genie))
    assert distortion == sorted(distortion, reverse=True)
    assert distortion[-1] == 0.0


@pytest.mark.slow
def test_greedy_agrees_with_oracle():
    agree, total = 0, 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 6))
        kind = ("ring", "line", "random")[seed % 3]
        if kind == "ring":
            g = make_ring(n, PRESET)
        elif kind == "line":
            g = make_line(n, PRESET)
        else:
            g = make_random(n, 1, seed, PRESET)
        p = (0.9, 1.0)[seed % 2]
        traj = simulate(g, PimParams(d=2, p=p, T=50_000, seed=seed))
        pairs = build_pairs(traj)
        same = all(
            set(recover_neighborhood(traj, pairs, v, 0.1).neighbors)
            == exhaustive_neighborhood(traj, pairs, v, 0.1, max_size=n - 1)
            for v in range(n)
        )
        agree += same
        total += 1
    assert agree >= 95
