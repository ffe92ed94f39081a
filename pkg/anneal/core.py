"""
anneal/core.py
──────────────
Simulated annealing over off-diagonal class assignments.

How it works
────────────
A state is an n×n array of class codes: code 0 is the zero class, the other
codes pick a vanishing class (for m = 6: 4 vanishes mod 2, 3 vanishes mod 3).
The diagonal is always 1. The energy of a state is

    max_p rank_GF(p)(M)  +  (non-zero-class off-diagonal entries) / n²

so the integer part is the gadget width t that from_target would produce and
the fraction breaks ties toward sparser targets.

Each iteration recolours one random off-diagonal position. Moves that do not
raise the energy are always taken; uphill moves are accepted with the
Metropolis probability exp(-Δ / T), where T falls linearly from T0 to T_min
over the budget.

The search starts from the best block-partition assignment (see
base_search._seed_codes) and stops as soon as t ≤ t_goal.

Determinism
───────────
All randomness comes from one ``np.random.default_rng(seed)``; the same
(n, t_goal, seed, budget, m) always walks the same path.
"""

import logging
import math

import numpy as np

from base_search import BaseGadgetSearch, SearchOutcome
from config import DEFAULT_BUDGET, DEFAULT_SEED
from errors import InvalidInputError
from zmod import Modulus

logger = logging.getLogger(__name__)


class AnnealingGadgetSearch(BaseGadgetSearch):
    """Local search for a class assignment whose target factorizes with t ≤ t_goal."""

    def __init__(self, n: int, mod: Modulus, t_goal: int,
                 seed: int = DEFAULT_SEED,
                 budget: int = DEFAULT_BUDGET,
                 t0: float = 1.0,
                 t_min: float = 0.01,
                 **kwargs):

        super().__init__(n, mod, seed=seed, budget=budget)
        self._require_searchable_modulus()
        if t_goal < 1:
            raise InvalidInputError(f"t_goal must be >= 1, got {t_goal}")

        self.t_goal = t_goal
        self.t0     = t0
        self.t_min  = t_min
        self._rng   = np.random.default_rng(seed)

        self._positions = np.argwhere(self._off_mask)   # (n²-n, 2), row-major

    def _recipe(self) -> str:
        return (f"anneal(n={self.n},t_goal={self.t_goal},"
                f"seed={self.seed},budget={self.budget})")

    def _temperature(self, iteration: int) -> float:
        frac = iteration / max(self.budget, 1)
        return self.t0 + (self.t_min - self.t0) * frac

    # ─────────────────────────────────────────────────────────────────────────
    # Main loop
    # ─────────────────────────────────────────────────────────────────────────

    def run(self) -> SearchOutcome:
        current = self._seed_codes()
        current_energy = self._energy(current)
        best, best_energy = current.copy(), current_energy
        logger.info("[anneal] n=%d t_goal=%d seed=%d | start t=%d",
                    self.n, self.t_goal, self.seed, int(best_energy))

        iteration = 0
        n_classes = len(self.classes)
        log_every = max(1, self.budget // 10)

        while int(best_energy) > self.t_goal and iteration < self.budget and len(self._positions):
            k, l = self._positions[self._rng.integers(len(self._positions))]
            # uniformly one of the other codes
            new_code = (current[k, l] + 1 + self._rng.integers(n_classes - 1)) % n_classes

            candidate = current.copy()
            candidate[k, l] = new_code
            energy = self._energy(candidate)
            delta = energy - current_energy

            temperature = self._temperature(iteration)
            accept_draw = self._rng.random()
            if delta <= 0 or accept_draw < math.exp(-delta / temperature):
                current, current_energy = candidate, energy
                if energy < best_energy:
                    best, best_energy = candidate.copy(), energy

            iteration += 1
            if iteration % log_every == 0:
                logger.info("[anneal] iter %d/%d | best=%d T=%.3f",
                            iteration, self.budget, int(best_energy), temperature)

        best_t = int(best_energy)
        if best_t <= self.t_goal:
            gadget = self._decode(best, self._recipe())
            logger.info("[anneal] Done. t=%d after %d iterations", gadget.t, iteration)
            return SearchOutcome(True, gadget, gadget.t, iteration,
                                 f"found t={gadget.t} <= {self.t_goal} after {iteration} iterations")

        logger.info("[anneal] Exhausted. best t=%d > t_goal=%d", best_t, self.t_goal)
        return SearchOutcome(False, None, best_t, iteration,
                             f"budget of {self.budget} exhausted; best t={best_t} > t_goal={self.t_goal}")
