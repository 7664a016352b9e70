import math

import numpy as np
import pandas as pd
import pytest

from entropy import (
    JointCounts,
    Symbol,
    build_pairs,
    canonical_records,
    collate_pairs,
    cond_entropy,
    dump_counts_csv,
    empirical_joint,
    entropy,
    is_chain,
    l1_distance,
    marginalize,
    support_symbols,
)
from graph import make_ring
from simulator import PimParams, Trajectory, replay_effective_index, simulate
from bounds import t_min
from utils.errors import EmptyDistributionError, IncompatibleError, MissingHiddenDataError, ParameterError


def traj_from(N, M=None, C=None, d=None) -> Trajectory:
    N = np.asarray(N, dtype=np.int64)
    M = np.ones_like(N) if M is None else np.asarray(M, dtype=np.int64)
    if C is None:
        return Trajectory(N=N, M=M)
    C = np.asarray(C, dtype=np.int8)
    return Trajectory(N=N, M=M, X=N / M, C=C, e=replay_effective_index(C, d), d=d)


def random_traj(rng, T=60, n=4, m_bar=1) -> Trajectory:
    M = rng.integers(1, m_bar + 2, size=(T, n))
    N = rng.binomial(M, rng.random((T, n)))
    return Trajectory(N=N, M=M)


def test_symbols_reduce():
    assert Symbol(2, 4) == Symbol(1, 2)
    assert str(Symbol(2, 4)) == "1/2"
    assert Symbol(0, 3) == Symbol(0, 1)
    assert Symbol(1, 3) < Symbol(1, 2) < Symbol(1, 1)
    with pytest.raises(ParameterError):
        Symbol(3, 2)


def test_support_symbols():
    assert [str(s) for s in support_symbols(1)] == ["0/1", "1/2", "1/1"]
    assert [str(s) for s in support_symbols(2)] == ["0/1", "1/3", "1/2", "2/3", "1/1"]


def test_naive_pairs():
    traj = traj_from(np.zeros((5, 1)))
    assert build_pairs(traj, "naive").as_list() == [(0, 1), (1, 2), (2, 3), (3, 4)]


def test_genie_pairs_follow_generating_parent():
    C = [1, 1, 1, 1, 0, 1]
    traj = traj_from(np.zeros((6, 1)), C=C, d=2)
    pairs = build_pairs(traj, "genie")
    assert pairs.as_list() == [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]
    assert len(pairs) == traj.T - 1


def test_genie_needs_hidden_data():
    with pytest.raises(MissingHiddenDataError):
        build_pairs(traj_from(np.zeros((4, 1))), "genie")
    with pytest.raises(ParameterError):
        build_pairs(traj_from(np.zeros((4, 1))), "oracle")


@pytest.mark.parametrize("seed", range(20))
def test_genie_equals_naive_without_resets(seed):
    traj = simulate(make_ring(3), PimParams(d=2, p=1.0, T=150, burn_in=10, seed=seed))
    naive, genie = build_pairs(traj, "naive"), build_pairs(traj, "genie")
    assert naive.same_pairs(genie)
    for v in range(3):
        assert cond_entropy(traj, naive, v, {(v + 1) % 3}) == cond_entropy(traj, genie, v, {(v + 1) % 3})


def test_empirical_joint_tally():
    traj = traj_from([[0, 1], [1, 1], [0, 1]], M=[[1, 2], [1, 2], [1, 2]])
    pairs = build_pairs(traj)
    c = empirical_joint(traj, pairs, 0, set())
    assert c.table == {(Symbol(1, 1), Symbol(0, 1)): 1, (Symbol(0, 1), Symbol(1, 1)): 1}
    assert c.total == 2
    cq = empirical_joint(traj, pairs, 0, {1})
    half = Symbol(1, 2)
    assert cq.table == {(Symbol(1, 1), Symbol(0, 1), half): 1, (Symbol(0, 1), Symbol(1, 1), half): 1}
    with pytest.raises(ParameterError):
        empirical_joint(traj, pairs, 0, {0})


def test_keys_stay_in_support(ring10):
    traj = simulate(ring10, PimParams(d=2, p=0.9, M_bar=1, T=300, seed=1))
    c = empirical_joint(traj, build_pairs(traj), 0, {9, 1})
    symbols = {s for key in c.table for s in key}
    assert symbols <= set(support_symbols(1))
    assert c.total == traj.T - 1


def test_entropy_examples():
    uniform = JointCounts.from_table({("a",): 5, ("b",): 5, ("c",): 5, ("d",): 5})
    assert entropy(uniform) == pytest.approx(2.0, abs=1e-12)
    assert entropy(JointCounts.from_table({("a",): 7})) == 0.0
    assert entropy(JointCounts.from_table({("a",): 3, ("b",): 1})) == pytest.approx(0.811278, abs=1e-6)
    with pytest.raises(EmptyDistributionError):
        entropy(JointCounts.from_table({}, variables=("x",)))


def test_entropy_matches_closed_form():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        counts = rng.integers(0, 20, size=rng.integers(1, 12))
        if counts.sum() == 0:
            continue
        table = {(i,): int(n) for i, n in enumerate(counts) if n > 0}
        p = counts[counts > 0] / counts.sum()
        assert entropy(JointCounts.from_table(table)) == pytest.approx(-np.sum(p * np.log2(p)), abs=1e-12)


def test_cond_entropy_deterministic_successor():
    N = np.array([[t % 2] for t in range(40)])
    traj = traj_from(N)
    assert cond_entropy(traj, build_pairs(traj), 0, set()) == 0.0


def test_cond_entropy_fair_coin():
    rng = np.random.default_rng(3)
    traj = traj_from(rng.integers(0, 2, size=(20_000, 2)))
    assert cond_entropy(traj, build_pairs(traj), 0, {1}) == pytest.approx(1.0, abs=0.01)


def test_conditioning_never_increases_entropy():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        traj = random_traj(rng)
        pairs = build_pairs(traj)
        v = int(rng.integers(4))
        others = [k for k in range(4) if k != v]
        Q = set(rng.choice(others, size=int(rng.integers(0, 3)), replace=False).tolist())
        u = next(k for k in others if k not in Q)
        assert cond_entropy(traj, pairs, v, Q | {u}) <= cond_entropy(traj, pairs, v, Q) + 1e-12


def test_cond_entropy_bounded_by_successor_alphabet():
    rng = np.random.default_rng(2)
    for _ in range(50):
        traj = random_traj(rng, m_bar=2)
        pairs = build_pairs(traj)
        h = cond_entropy(traj, pairs, 0, {1, 2})
        successors = len(np.unique(traj.Y[pairs.next, 0]))
        assert 0.0 <= h <= math.log2(successors) + 1e-12


def test_l1_examples():
    a = JointCounts.from_table({("x",): 1, ("y",): 1})
    assert l1_distance(a, a) == 0.0
    assert l1_distance(JointCounts.from_table({("x",): 2}), JointCounts.from_table({("y",): 5})) == 2.0
    assert l1_distance(a, JointCounts.from_table({("x",): 1})) == pytest.approx(1.0)
    with pytest.raises(IncompatibleError):
        l1_distance(a, JointCounts.from_table({("x", "y"): 1}))


def test_l1_entropy_continuity():
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 1000:
        size = int(rng.integers(2, 10))
        base = rng.integers(1, 50, size=size)
        noise = rng.integers(0, 4, size=size)
        a = JointCounts.from_table({(i,): int(n) for i, n in enumerate(base)})
        b = JointCounts.from_table({(i,): int(n) for i, n in enumerate(base + noise)})
        delta = l1_distance(a, b)
        if not 0 < delta <= 0.5:
            continue
        checked += 1
        assert abs(entropy(a) - entropy(b)) <= delta * math.log2(size / delta) + 1e-12


def test_marginalize_and_chain_rule(copy_traj):
    pairs = build_pairs(copy_traj)
    joint = empirical_joint(copy_traj, pairs, 1, {0})
    marginal = marginalize(joint, [1, 2])
    assert marginal.total == joint.total
    assert marginal.variables == ("v1", "v0")
    assert cond_entropy(copy_traj, pairs, 1, {0}) == pytest.approx(entropy(joint) - entropy(marginal), abs=1e-12)
    with pytest.raises(ParameterError):
        marginalize(joint, [3])


def test_canonical_form_is_stable(copy_traj):
    pairs = build_pairs(copy_traj)
    a = empirical_joint(copy_traj, pairs, 1, {0, 2})
    b = JointCounts.from_table(dict(reversed(list(a.table.items()))))
    assert canonical_records(a) == canonical_records(b)


def test_dump_counts_csv(tmp_path):
    traj = traj_from([[0, 1], [1, 1], [0, 1], [1, 0]], M=[[1, 2], [1, 2], [1, 2], [1, 1]])
    c = empirical_joint(traj, build_pairs(traj), 0, {1})
    frame = pd.read_csv(dump_counts_csv(c, tmp_path / "counts.csv"), dtype=str)
    assert list(frame.columns) == ["sym_1", "sym_2", "sym_3", "count"]
    rows = list(frame.itertuples(index=False, name=None))
    assert rows == sorted(rows, key=lambda r: tuple(Symbol(*map(int, s.split("/"))) for s in r[:3]))
    assert sum(int(r[3]) for r in rows) == 3


def test_worst_case_collation_is_a_chain():
    d = 2
    traj = simulate(make_ring(3), PimParams(d=d, p=0.0, T=9, burn_in=0, seed=0))
    assert traj.C.tolist() == [1, 1, 1, 0, 0, 0, 0, 0, 0]
    chain = collate_pairs(build_pairs(traj, "genie"), d)
    assert chain.as_list() == [(0, 1), (1, 4), (4, 7)]
    assert is_chain(chain)
    samples = [int(chain.prev[0])] + chain.next.tolist()
    assert len(samples) == t_min(9, d)
    assert traj.e[samples].tolist() == list(range(len(samples)))


def test_collation_length_at_t13():
    d = 2
    traj = simulate(make_ring(3), PimParams(d=d, p=0.0, T=13, burn_in=0, seed=0))
    chain = collate_pairs(build_pairs(traj, "genie"), d)
    assert is_chain(chain)
    assert len(chain) + 1 == t_min(13, d) == 5


def test_collated_chain_matches_reset_free_pairing():
    d, T = 2, 31
    tails = simulate(make_ring(3), PimParams(d=d, p=0.0, T=T, burn_in=0, seed=5))
    chain = collate_pairs(build_pairs(tails, "genie"), d)
    plain = simulate(make_ring(3), PimParams(d=d, T=T, burn_in=0, seed=5, resets_enabled=False))
    reference = build_pairs(plain, "genie")
    # both are consecutive chains over the effective index
    assert np.array_equal(tails.e[chain.next] - tails.e[chain.prev], np.ones(len(chain), dtype=np.int64))
    assert np.array_equal(plain.e[reference.next] - plain.e[reference.prev], np.ones(len(reference), dtype=np.int64))
    assert is_chain(chain) and is_chain(reference)
