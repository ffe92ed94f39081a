"""
Bench Runner Module
===================
Runs the represented product against the schoolbook product on the
Kronecker tower g, g⊗g, g⊗g⊗g, ... of one gadget and tabulates the counted
multiplications. Wall-clock time is recorded but only the counts are
contractual.
"""

import logging
import time
from pathlib import Path

import numpy as np
import pandas as pd

from bilinear import OpTally, matmul_represent, naive_matmul, verify_represented_product
from config import DEFAULT_SEED
from gadget import DotGadget, kronecker_power

logger = logging.getLogger(__name__)

CSV_HEADER = "# modrep-bench v1"
COLUMNS = ["n", "t", "strategy", "counted_rep", "counted_naive", "ratio", "verified", "seed", "wall_ms"]


def strategy_of(g: DotGadget) -> str:
    """Leading recipe token, e.g. 'block' for 'block(n=9,s=3)'."""
    return g.recipe.split("(", 1)[0] or "manual"


def run_level(g: DotGadget, rng: np.random.Generator, seed: int, strategy: str) -> dict:
    """
    Benchmark one gadget on a random pair of matrices.

    Parameters:
    -----------
    g : DotGadget
        Gadget at this tower level
    rng : numpy.random.Generator
        Source of the random operands X, Y
    seed : int
        Recorded in the row
    strategy : str
        Gadget strategy label for the row

    Returns:
    --------
    dict
        One CSV row keyed by COLUMNS
    """
    X = rng.integers(0, g.mod.m, size=(g.n, g.n), dtype=np.int64)
    Y = rng.integers(0, g.mod.m, size=(g.n, g.n), dtype=np.int64)

    rep_tally = OpTally()
    start = time.perf_counter()
    matmul_represent(X, Y, g, rep_tally)
    wall_ms = (time.perf_counter() - start) * 1000.0

    naive_tally = OpTally()
    naive_matmul(X, Y, naive_tally, g.mod)

    verified = verify_represented_product(g).is_one_a_strong
    return {
        "n":             g.n,
        "t":             g.t,
        "strategy":      strategy,
        "counted_rep":   rep_tally.counted_mults,
        "counted_naive": naive_tally.counted_mults,
        "ratio":         round(rep_tally.counted_mults / naive_tally.counted_mults, 6),
        "verified":      verified,
        "seed":          seed,
        "wall_ms":       round(wall_ms, 3),
    }


def run_bench(g: DotGadget, levels: int, seed: int = DEFAULT_SEED, strategy: str = None) -> pd.DataFrame:
    """Rows for tower levels 1..levels, operands drawn from one seeded generator."""
    strategy = strategy or strategy_of(g)
    rng = np.random.default_rng(seed)
    rows = []
    for level in range(1, levels + 1):
        g_level = kronecker_power(g, level)
        row = run_level(g_level, rng, seed, strategy)
        logger.info("[bench] level %d/%d | n=%d t=%d counted_rep=%d counted_naive=%d verified=%s",
                    level, levels, row["n"], row["t"], row["counted_rep"],
                    row["counted_naive"], row["verified"])
        rows.append(row)
    return pd.DataFrame(rows, columns=COLUMNS)


def write_bench_csv(df: pd.DataFrame, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(CSV_HEADER + "\n")
        df.to_csv(f, index=False, lineterminator="\n")
    return path


def read_bench_csv(path) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")
