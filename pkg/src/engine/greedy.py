from typing import Optional

from engine.base import BaseRecovery


class PIMRecGreedy(BaseRecovery):
    """Recursive greedy neighbourhood recovery.

    Each outer pass re-seeds the working set U with the current estimate T and
    greedily adds the node with the largest entropy drop while that drop exceeds
    kappa / 2. Only the last node added in the pass is promoted into T. The search
    ends when a pass promotes nothing new.
    """
    name = "greedy"

    def _best_candidate(self, working: set[int]) -> tuple[Optional[int], float]:
        best, best_score = None, -1.0
        # ascending order + strict comparison: ties go to the smallest index
        for k in self._candidates(working):
            score = self.gain(working, k)
            if score > best_score:
                best, best_score = k, score
        return best, best_score

    def _inner_pass(self, estimate: set[int], outer: int) -> Optional[int]:
        working = set(estimate)
        last = None
        while True:
            best, score = self._best_candidate(working)
            if best is None:
                return last
            if not score > self.threshold:
                self._log("reject", best, score, outer)
                return last
            if len(working) >= self._max_set:
                self.converged = False
                self._log("size-cap", best, score, outer)
                return last
            working.add(best)
            last = best
            self.scores[best] = score
            self._log("accept", best, score, outer)

    def _search(self) -> set[int]:
        estimate: set[int] = set()
        for outer in range(self._traj.node_count):
            last = self._inner_pass(estimate, outer)
            if last is None or last in estimate:
                break
            estimate.add(last)
            self._log("promote", last, self.scores.get(last), outer)
        return estimate
