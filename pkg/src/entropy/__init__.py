from entropy.symbols import Symbol, support_symbols, trajectory_codes
from entropy.pairs import PAIRING_MODES, PairSet, build_pairs, collate_pairs, is_chain
from entropy.counts import (
    JointCounts,
    canonical_records,
    cond_entropy,
    dump_counts_csv,
    empirical_joint,
    entropy,
    l1_distance,
    marginalize,
)
