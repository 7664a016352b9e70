"""Count tables over symbol tuples and plug-in entropies (bits)."""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
from scipy.stats import entropy as scipy_entropy

from entropy.pairs import PairSet
from entropy.symbols import trajectory_codes
from simulator import Trajectory
from utils.errors import EmptyDistributionError, IncompatibleError, ParameterError

PACKED_LIMIT = 2**62


@dataclass(frozen=True, eq=False)
class JointCounts:
    """Distinct symbol tuples with their counts.

    ``keys`` rows are codes into ``alphabet`` in the order of ``variables``;
    rows are unique and sorted lexicographically.
    """
    keys: np.ndarray
    counts: np.ndarray
    alphabet: tuple
    variables: tuple[str, ...] = field(default=())

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def arity(self) -> int:
        return self.keys.shape[1]

    @property
    def table(self) -> dict[tuple, int]:
        return {
            tuple(self.alphabet[c] for c in row): int(n)
            for row, n in zip(self.keys.tolist(), self.counts.tolist())
        }

    @classmethod
    def from_table(cls, table: Mapping[tuple, int], variables: Sequence[str] = ()) -> "JointCounts":
        """Build from a plain mapping; symbols only need to be sortable and hashable."""
        arities = {len(k) for k in table}
        if len(arities) > 1:
            raise IncompatibleError(f"mixed key arities {sorted(arities)}")
        arity = arities.pop() if arities else len(variables)
        if not table:
            return cls(np.zeros((0, arity), dtype=np.int64), np.zeros(0, dtype=np.int64), (), tuple(variables))
        alphabet = tuple(sorted({s for key in table for s in key}))
        index = {s: i for i, s in enumerate(alphabet)}
        rows = np.array([[index[s] for s in key] for key in table], dtype=np.int64).reshape(-1, arity)
        keys, counts = _tally(rows, len(alphabet), np.array(list(table.values()), dtype=np.int64))
        return cls(keys, counts, alphabet, tuple(variables))


def _tally(rows: np.ndarray, base: int, weights: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Unique rows (sorted) and their multiplicities."""
    arity = rows.shape[1]
    if rows.shape[0] == 0:
        return rows.reshape(0, arity), np.zeros(0, dtype=np.int64)
    base = max(base, 1)
    if base**arity < PACKED_LIMIT:
        # mixed-radix packing, first column most significant so order stays lexicographic
        radix = base ** np.arange(arity - 1, -1, -1, dtype=np.int64)
        packed = rows @ radix
        uniq, inverse = np.unique(packed, return_inverse=True)
        keys = (uniq[:, np.newaxis] // radix) % base
    else:
        keys, inverse = np.unique(rows, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    if weights is None:
        counts = np.bincount(inverse, minlength=len(keys))
    else:
        counts = np.bincount(inverse, weights=weights, minlength=len(keys)).astype(np.int64)
    return keys, counts


def empirical_joint(traj: Trajectory, pairs: PairSet, v: int, Q: Iterable[int]) -> JointCounts:
    """Counts of (Y_v(next), Y_v(prev), Y_q(prev) for q in Q ascending) over the pairs."""
    Q = sorted(Q)
    if v in Q:
        raise ParameterError(f"node {v} cannot condition on itself (Q={Q})")
    n = traj.node_count
    if not 0 <= v < n or any(not 0 <= q < n for q in Q):
        raise ParameterError(f"node index outside [0, {n}): v={v}, Q={Q}")
    codes, alphabet = trajectory_codes(traj)
    prev_cols = codes[pairs.prev][:, [v] + Q]
    rows = np.column_stack([codes[pairs.next, v], prev_cols])
    keys, counts = _tally(rows, len(alphabet))
    variables = ("v+", f"v{v}") + tuple(f"v{q}" for q in Q)
    return JointCounts(keys, counts, alphabet, variables)


def marginalize(c: JointCounts, keep: Sequence[int]) -> JointCounts:
    """Project onto the variables at positions ``keep``."""
    keep = list(keep)
    if any(not 0 <= i < c.arity for i in keep):
        raise ParameterError(f"positions {keep} outside arity {c.arity}")
    keys, counts = _tally(c.keys[:, keep], len(c.alphabet), c.counts)
    return JointCounts(keys, counts, c.alphabet, tuple(c.variables[i] for i in keep) if c.variables else ())


def entropy(c: JointCounts) -> float:
    if c.total <= 0:
        raise EmptyDistributionError("entropy of an empty count table")
    return float(scipy_entropy(c.counts, base=2))


def cond_entropy(traj: Trajectory, pairs: PairSet, v: int, Q: Iterable[int]) -> float:
    """H(v+ | v, Q) = H(v+, v, Q) - H(v, Q), both from the same pairs."""
    joint = empirical_joint(traj, pairs, v, Q)
    marginal = marginalize(joint, range(1, joint.arity))
    # rounding can push the exact-zero case slightly negative
    return max(entropy(joint) - entropy(marginal), 0.0)


def l1_distance(a: JointCounts, b: JointCounts) -> float:
    if a.arity != b.arity:
        raise IncompatibleError(f"arity {a.arity} vs {b.arity}")
    pa = {k: n / a.total for k, n in a.table.items()} if a.total else {}
    pb = {k: n / b.total for k, n in b.table.items()} if b.total else {}
    return float(sum(abs(pa.get(k, 0.0) - pb.get(k, 0.0)) for k in pa.keys() | pb.keys()))


def dump_counts_csv(c: JointCounts, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = {f"sym_{i + 1}": [str(c.alphabet[code]) for code in c.keys[:, i]] for i in range(c.arity)}
    frame = pd.DataFrame(columns)
    frame["count"] = c.counts
    # keys are already sorted by symbol value
    frame.to_csv(path, index=False)
    return path


def canonical_records(c: JointCounts) -> list[tuple[tuple[str, ...], int]]:
    return [(tuple(str(s) for s in key), n) for key, n in sorted(c.table.items())]
