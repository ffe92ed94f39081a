"""
gadget_search.py
────────────────
Entry points for the gadget searches, plus the strategy factory.
The search algorithms live in the `anneal` and `exhaustive` packages.
"""

from anneal import AnnealingGadgetSearch
from base_search import SearchOutcome
from config import DEFAULT_BUDGET, DEFAULT_MODULUS, DEFAULT_SEED
from exhaustive import ExhaustiveGadgetSearch
from zmod import Modulus, factorize

# ── Search factory ───────────────────────────────────────────────────────────
_SEARCH_MAP = {
    "anneal":     AnnealingGadgetSearch,
    "exhaustive": ExhaustiveGadgetSearch,
}


def get_search_class(strategy: str):
    """Return the search class for the given strategy key (case-insensitive)."""
    key = strategy.lower().strip()
    if key not in _SEARCH_MAP:
        raise ValueError(f"Unknown search strategy '{strategy}'. Choose from: {list(_SEARCH_MAP.keys())}")
    return _SEARCH_MAP[key]


def local_search(n: int, t_goal: int, seed: int = DEFAULT_SEED,
                 budget: int = DEFAULT_BUDGET, mod: Modulus = None) -> SearchOutcome:
    mod = mod or factorize(DEFAULT_MODULUS)
    SearchClass = get_search_class("anneal")
    return SearchClass(n, mod, t_goal, seed=seed, budget=budget).run()


def exhaustive_01(n: int, t: int, mod: Modulus = None) -> SearchOutcome:
    mod = mod or factorize(DEFAULT_MODULUS)
    SearchClass = get_search_class("exhaustive")
    return SearchClass(n, mod, t).run()


__all__ = [
    "AnnealingGadgetSearch",
    "ExhaustiveGadgetSearch",
    "SearchOutcome",
    "exhaustive_01",
    "get_search_class",
    "local_search",
]
