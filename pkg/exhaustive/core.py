"""
exhaustive/core.py
──────────────────
Exhaustive enumeration of 0/1 gadgets (B, C) of a fixed width t.

Pairs are visited B-major, each matrix in row-major order with entry value 1
tried before 0, so the first valid pair is reproducible. For a fixed B all
2^(nt) choices of C are checked at once: M = B·C^T is evaluated as one
batched einsum and tested against the target invariants with array masks.

The guard 2^(2nt) ≤ 2^26 keeps the batch at most 8192 candidates wide.
"""

import itertools
import logging

import numpy as np

from base_search import SearchOutcome
from errors import InvalidInputError, SearchSpaceError
from gadget import DotGadget, off_diagonal_classes
from zmod import Modulus

logger = logging.getLogger(__name__)

MAX_BITS = 26


class ExhaustiveGadgetSearch:
    """
    Enumerates 0/1 pairs directly; it shares only the SearchOutcome contract
    with the assignment-based searches. Extra keyword arguments such as seed
    and budget are accepted and ignored.
    """

    def __init__(self, n: int, mod: Modulus, t: int, **kwargs):
        if n < 1:
            raise InvalidInputError(f"n must be >= 1, got {n}")
        if t < 1:
            raise InvalidInputError(f"t must be >= 1, got {t}")
        if 2 * n * t > MAX_BITS:
            raise SearchSpaceError(
                f"2^(2·{n}·{t}) = 2^{2 * n * t} candidate pairs exceeds the 2^{MAX_BITS} guard"
            )
        self.n = n
        self.mod = mod
        self.t = t
        self._admissible = np.array(sorted(off_diagonal_classes(mod).values()), dtype=np.int64)
        self._eye = np.eye(n, dtype=bool)

    def _all_matrices(self) -> np.ndarray:
        """Every 0/1 n×t matrix, row-major, 1 before 0: shape (2^(nt), n, t)."""
        bits = np.array(list(itertools.product((1, 0), repeat=self.n * self.t)), dtype=np.int64)
        return bits.reshape(-1, self.n, self.t)

    def _valid_mask(self, M: np.ndarray) -> np.ndarray:
        diag_ok = np.where(self._eye, M == 1, True)
        off_ok = np.where(self._eye, True, np.isin(M, self._admissible))
        return (diag_ok & off_ok).all(axis=(1, 2))

    def run(self) -> SearchOutcome:
        candidates = self._all_matrices()
        total = len(candidates) ** 2
        logger.info("[exhaustive] n=%d t=%d | %d candidate pairs", self.n, self.t, total)

        for b_index, B in enumerate(candidates):
            M = np.einsum("it,cjt->cij", B, candidates) % self.mod.m
            hits = np.flatnonzero(self._valid_mask(M))
            if hits.size:
                C = candidates[int(hits[0])]
                visited = b_index * len(candidates) + int(hits[0]) + 1
                gadget = DotGadget(self.mod, self.n, self.t, B, C,
                                   recipe=f"exhaustive01(n={self.n},t={self.t})")
                logger.info("[exhaustive] Done. first valid pair at %d/%d", visited, total)
                return SearchOutcome(True, gadget, self.t, visited,
                                     f"found 0/1 gadget with t={self.t} at pair {visited}/{total}")

        logger.info("[exhaustive] Infeasible. %d pairs enumerated", total)
        return SearchOutcome(False, None, None, total,
                             f"infeasible: no 0/1 pair (B, C) with t={self.t} among {total}")
