"""
base_search.py
──────────────
Shared base class for all gadget searches.

Provides:
  - Search outcome value   : SearchOutcome (found / exhausted, never an exception)
  - Class table            : self.classes (zero class first, then the vanishing classes)
  - Shared objective       : _energy(codes)  = max per-prime rank, tie-broken toward
                             more zero-class entries
  - Block seed assignment  : _seed_codes()   best block partition over divisors of n
  - Decode                 : _decode(codes)  assignment → GadgetTarget → from_target

Assignment-based searches (annealing) inherit this class and only need to
implement:
    def run(self) -> SearchOutcome
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import DEFAULT_BUDGET, DEFAULT_SEED
from errors import InvalidInputError, InvalidModulusError, UnsupportedRingError
from gadget import DotGadget, GadgetTarget, from_target, off_diagonal_classes
from zmod import Modulus, rank_modp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a search. ``found=False`` is the exhausted / infeasible report."""

    found: bool
    gadget: Optional[DotGadget]
    best_t: Optional[int]
    iterations: int
    report: str

    @property
    def exhausted(self) -> bool:
        return not self.found


class BaseGadgetSearch:
    """
    Abstract base – do NOT instantiate directly.
    Concrete searches must implement `run()`.
    """

    def __init__(self, n: int, mod: Modulus, seed: int = DEFAULT_SEED,
                 budget: int = DEFAULT_BUDGET):
        if n < 1:
            raise InvalidInputError(f"n must be >= 1, got {n}")
        if budget < 0:
            raise InvalidInputError(f"budget must be >= 0, got {budget}")
        self.n      = n
        self.mod    = mod
        self.seed   = seed
        self.budget = budget

        classes = off_diagonal_classes(mod)
        full = frozenset(mod.primes)
        # code 0 is the zero class; the rest keep off_diagonal_classes order
        self.classes: Tuple[int, ...] = (classes[full],) + tuple(
            v for key, v in classes.items() if key != full
        )
        self._off_mask = ~np.eye(n, dtype=bool)

    # ─────────────────────────────────────────────────────────────────────────
    # Modulus requirements for assignment-based searches
    # ─────────────────────────────────────────────────────────────────────────

    def _require_searchable_modulus(self):
        if not self.mod.non_prime_power:
            raise InvalidModulusError(
                f"{self.mod} is a prime power; only exact representations exist"
            )
        if not self.mod.square_free:
            raise UnsupportedRingError(f"{self.mod} is not square-free")

    # ─────────────────────────────────────────────────────────────────────────
    # Shared objective
    # ─────────────────────────────────────────────────────────────────────────

    def _matrix(self, codes: np.ndarray) -> np.ndarray:
        M = np.asarray(self.classes, dtype=np.int64)[codes]
        np.fill_diagonal(M, 1)
        return M

    def _max_rank(self, codes: np.ndarray) -> int:
        M = self._matrix(codes)
        return max(rank_modp(M, p) for p in self.mod.primes)

    def _energy(self, codes: np.ndarray) -> float:
        """
        Lower = better. Integer part is t = max_p rank_p(M); the fractional
        part is the share of off-diagonal positions not in the zero class.
        """
        nonzero = int(np.count_nonzero(codes[self._off_mask]))
        return self._max_rank(codes) + nonzero / (self.n * self.n)

    # ─────────────────────────────────────────────────────────────────────────
    # Seed assignment
    # ─────────────────────────────────────────────────────────────────────────

    def _block_codes(self, s: int) -> np.ndarray:
        """Intra-block positions in the first prime's class, inter-block in the second's."""
        blocks = np.arange(self.n) // s
        same = blocks[:, None] == blocks[None, :]
        return np.where(same, 1, 2).astype(np.int64)

    def _seed_codes(self) -> np.ndarray:
        """Best block partition over the divisors of n, or all zero-class if none beats it."""
        best = np.zeros((self.n, self.n), dtype=np.int64)
        best_energy = self._energy(best)
        for s in range(1, self.n + 1):
            if self.n % s:
                continue
            codes = self._block_codes(s)
            energy = self._energy(codes)
            if energy < best_energy:
                best, best_energy = codes, energy
        return best

    # ─────────────────────────────────────────────────────────────────────────
    # Decode
    # ─────────────────────────────────────────────────────────────────────────

    def _decode(self, codes: np.ndarray, recipe: str) -> DotGadget:
        target = GadgetTarget.from_assignment(codes, self.classes, self.mod)
        return from_target(target, recipe=recipe)

    def run(self) -> SearchOutcome:
        raise NotImplementedError("Subclass must implement run()")
