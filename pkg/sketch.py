"""
sketch.py
─────────
Matrix compression and recovery through a dot-product gadget (B, C).

    right_represent   X ↦ X·B·C^T        (columns: combinations of columns of X)
    left_represent    X ↦ C·B^T·X        (rows: combinations of rows of X)
    compress          X ↦ S = B^T·X·B    (t×t)
    recover           S ↦ C·S·C^T        (n×n)

With M = B·C^T, the output of recover(compress(X)) has x_kl-coefficient
M_ki·M_lj in entry (i, j), so the whole pipeline is a 1-a-strong
representation of X although it passes through only t² residues.
No attempt is made to decode X back exactly.
"""

import logging
from dataclasses import dataclass

import numpy as np

from errors import DimensionMismatchError
from gadget import DotGadget
from repcheck import (
    MatrixRepReport,
    PolyGrid,
    RepClassification,
    classify_product_table,
    const_times_grid,
    grid_times_const,
    probe_linear_rep,
    symbolic_matrix,
)
from zmod import as_residue_matrix, mat_chain, mat_transpose

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SketchBundle:
    gadget: DotGadget
    S: np.ndarray
    n: int

    def __post_init__(self):
        t = self.gadget.t
        if np.shape(self.S) != (t, t):
            raise DimensionMismatchError(
                f"sketch is {np.shape(self.S)} but the gadget has t={t}"
            )
        if self.n != self.gadget.n:
            raise DimensionMismatchError(f"bundle n={self.n} but the gadget has n={self.gadget.n}")


def _square_input(X, g: DotGadget) -> np.ndarray:
    X = as_residue_matrix(X, g.mod)
    if X.shape != (g.n, g.n):
        raise DimensionMismatchError(f"expected a {g.n}×{g.n} matrix, got {X.shape}")
    return X


def right_operator(g: DotGadget) -> np.ndarray:
    """K with right_represent(X) = X·K."""
    return g.M


def left_operator(g: DotGadget) -> np.ndarray:
    """K with left_represent(X) = K·X."""
    return mat_transpose(g.M, g.mod)


def right_represent(X, g: DotGadget) -> np.ndarray:
    X = _square_input(X, g)
    return mat_chain(g.mod, X, g.B, mat_transpose(g.C, g.mod))


def left_represent(X, g: DotGadget) -> np.ndarray:
    X = _square_input(X, g)
    return mat_chain(g.mod, g.C, mat_transpose(g.B, g.mod), X)


def compress(X, g: DotGadget) -> SketchBundle:
    X = _square_input(X, g)
    S = mat_chain(g.mod, mat_transpose(g.B, g.mod), X, g.B)
    logger.debug("compressed %d×%d -> %d×%d", g.n, g.n, g.t, g.t)
    return SketchBundle(g, S, g.n)


def recover(bundle: SketchBundle) -> np.ndarray:
    g = bundle.gadget
    S = as_residue_matrix(bundle.S, g.mod)
    return mat_chain(g.mod, g.C, S, mat_transpose(g.C, g.mod))


def recover_matrix(S, g: DotGadget) -> np.ndarray:
    """recover() for a raw t×t sketch read from disk."""
    return recover(SketchBundle(g, as_residue_matrix(S, g.mod), g.n))


# ── Closed-form verification ─────────────────────────────────────────────────

def verify_right(g: DotGadget) -> RepClassification:
    """x_ik-coefficient of entry (i, ν) is M_kν against δ(k, ν)."""
    return classify_product_table(g.M, 1, g.mod)


def verify_left(g: DotGadget) -> RepClassification:
    return classify_product_table(left_operator(g), 1, g.mod)


def verify_recover(g: DotGadget) -> RepClassification:
    """x_kl-coefficient of entry (i, j) is M_ki·M_lj against δ(k, i)·δ(l, j)."""
    return classify_product_table(g.M, 2, g.mod)


# ── Probe cross-checks ───────────────────────────────────────────────────────

def probe_right(g: DotGadget) -> MatrixRepReport:
    return probe_linear_rep(lambda E: right_represent(E, g), g.n, g.mod)


def probe_left(g: DotGadget) -> MatrixRepReport:
    return probe_linear_rep(lambda E: left_represent(E, g), g.n, g.mod)


def probe_recover(g: DotGadget) -> MatrixRepReport:
    return probe_linear_rep(lambda E: recover(compress(E, g)), g.n, g.mod)


# ── Materialized symbolic forms (small n) ────────────────────────────────────

def _symbolic_x(g: DotGadget) -> PolyGrid:
    return symbolic_matrix(g.n, g.mod.m, g.n * g.n)


def symbolic_right(g: DotGadget) -> PolyGrid:
    X = _symbolic_x(g)
    return grid_times_const(grid_times_const(X, g.B), mat_transpose(g.C, g.mod))


def symbolic_left(g: DotGadget) -> PolyGrid:
    X = _symbolic_x(g)
    return const_times_grid(g.C, const_times_grid(mat_transpose(g.B, g.mod), X))


def symbolic_recover(g: DotGadget) -> PolyGrid:
    X = _symbolic_x(g)
    S = grid_times_const(const_times_grid(mat_transpose(g.B, g.mod), X), g.B)
    return grid_times_const(const_times_grid(g.C, S), mat_transpose(g.C, g.mod))
