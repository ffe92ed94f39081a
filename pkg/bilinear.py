"""
bilinear.py
───────────
The "strange" product U(f)V and the represented matrix product.

For a bilinear form f(x, y) = Σ a_zt x_z y_t over Z_m, U(f)V is the u×v
matrix whose (i, l) entry is f(row i of U, column l of V), i.e. U·a·V.

Cost model
──────────
Only products of two variable-dependent values are counted. Multiplying by
a constant (an entry of B, C or a) is free, and so is every addition; both
are still tallied separately so the bookkeeping can be inspected.

    strange_product_circuit   u·v·t counted
    matmul_represent          t³ counted
    naive_matmul              n³ counted
"""

import logging
from dataclasses import asdict, dataclass

import numpy as np

from config import DEFAULT_MODULUS
from errors import DimensionMismatchError
from gadget import DotGadget
from repcheck import (
    MatrixRepReport,
    PolyGrid,
    RepClassification,
    bilinear_poly,
    classify_product_table,
    const_times_grid,
    grid_product,
    grid_times_const,
    probe_product_rep,
    symbolic_matrix,
)
from zmod import Modulus, as_residue_matrix, factorize, mat_chain, mat_mul, mat_transpose

logger = logging.getLogger(__name__)


# ── Types ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class BilinearForm:
    """f(x, y) = Σ a_zt x_z y_t over Z_m."""

    n: int
    a: np.ndarray
    m: int

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.int64)
        if a.shape != (self.n, self.n):
            raise DimensionMismatchError(f"coefficient matrix must be {self.n}×{self.n}, got {a.shape}")
        object.__setattr__(self, "a", a % self.m)

    @classmethod
    def from_gadget(cls, g: DotGadget) -> "BilinearForm":
        return cls(g.n, g.M, g.mod.m)

    def poly(self):
        return bilinear_poly(self.a, self.m)


@dataclass
class OpTally:
    """Operation counters for one evaluation; owned by a single caller."""

    counted_mults: int = 0
    free_const_mults: int = 0
    additions: int = 0

    def merge(self, other: "OpTally") -> "OpTally":
        self.counted_mults += other.counted_mults
        self.free_const_mults += other.free_const_mults
        self.additions += other.additions
        return self

    def __add__(self, other: "OpTally") -> "OpTally":
        return OpTally().merge(self).merge(other)

    def as_dict(self) -> dict:
        return asdict(self)


def _const_product(K: np.ndarray, V: np.ndarray, mod: Modulus, tally: OpTally) -> np.ndarray:
    """K·V with K constant: rows(K)·inner·cols(V) free multiplications."""
    rows, inner = K.shape
    cols = V.shape[1]
    tally.free_const_mults += rows * inner * cols
    tally.additions += rows * max(inner - 1, 0) * cols
    return mat_mul(K, V, mod)


def _product_const(V: np.ndarray, K: np.ndarray, mod: Modulus, tally: OpTally) -> np.ndarray:
    rows, inner = V.shape
    cols = K.shape[1]
    tally.free_const_mults += rows * inner * cols
    tally.additions += rows * max(inner - 1, 0) * cols
    return mat_mul(V, K, mod)


# ── Strange product ──────────────────────────────────────────────────────────

def strange_product_coeff(U, f: BilinearForm, V, mod: Modulus = None) -> np.ndarray:
    """w_il = Σ_{z,t} a_zt u_iz v_tl."""
    U = np.asarray(U, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    if U.ndim != 2 or V.ndim != 2 or U.shape[1] != f.n or V.shape[0] != f.n:
        raise DimensionMismatchError(
            f"U {U.shape} (f on {f.n} variables) V {V.shape} do not conform"
        )
    mod = mod or factorize(f.m)
    return mat_chain(mod, U % f.m, f.a, V % f.m)


def strange_product_circuit(U, g: DotGadget, V, tally: OpTally) -> np.ndarray:
    """
    U(f)V for the gadget's form f = B·C^T, evaluated as a ΣΠΣ circuit:
    entry (i, l) is Σ_j (u_i·B_{·j})(C_{·j}·v_l). The linear forms are free;
    each entry costs t counted multiplications.
    """
    mod = g.mod
    U = as_residue_matrix(U, mod)
    V = as_residue_matrix(V, mod)
    if U.shape[1] != g.n or V.shape[0] != g.n:
        raise DimensionMismatchError(
            f"U {U.shape} and V {V.shape} do not conform to a gadget on {g.n} variables"
        )
    u, v, t = U.shape[0], V.shape[1], g.t

    L = _product_const(U, g.B, mod, tally)                              # u×t linear forms
    R = _const_product(mat_transpose(g.C, mod), V, mod, tally)          # t×v linear forms

    tally.counted_mults += u * v * t
    tally.additions += u * v * max(t - 1, 0)
    return mat_mul(L, R, mod)


# ── Matrix products ──────────────────────────────────────────────────────────

def _square_pair(X, Y, mod: Modulus):
    X = as_residue_matrix(X, mod)
    Y = as_residue_matrix(Y, mod)
    if X.shape[0] != X.shape[1] or X.shape != Y.shape:
        raise DimensionMismatchError(f"expected square matrices of equal size, got {X.shape} and {Y.shape}")
    return X, Y


def matmul_represent(X, Y, g: DotGadget, tally: OpTally) -> np.ndarray:
    """
    D = C·(B^T X (f) Y B)·C^T with f = B·C^T.

    P = B^T X and Q = Y B cost nothing, W = P(f)Q costs t per entry (t³ in
    all), and D = C W C^T is free again. D is a 1-a-strong representation of
    XY; with the trivial gadget it is XY itself.
    """
    mod = g.mod
    X, Y = _square_pair(X, Y, mod)
    if X.shape[0] != g.n:
        raise DimensionMismatchError(f"matrices are {X.shape[0]}×{X.shape[0]}, gadget has n={g.n}")

    P = _const_product(mat_transpose(g.B, mod), X, mod, tally)
    Q = _product_const(Y, g.B, mod, tally)
    W = strange_product_circuit(P, g, Q, tally)
    D = _product_const(_const_product(g.C, W, mod, tally), mat_transpose(g.C, mod), mod, tally)
    logger.debug("matmul_represent n=%d t=%d counted=%d", g.n, g.t, tally.counted_mults)
    return D


def naive_matmul(X, Y, tally: OpTally, mod: Modulus = None) -> np.ndarray:
    """Schoolbook product: rows·inner·cols counted multiplications."""
    mod = mod or factorize(DEFAULT_MODULUS)
    X = as_residue_matrix(X, mod)
    Y = as_residue_matrix(Y, mod)
    if X.shape[1] != Y.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {X.shape} by {Y.shape}")
    rows, inner = X.shape
    cols = Y.shape[1]
    tally.counted_mults += rows * inner * cols
    tally.additions += rows * max(inner - 1, 0) * cols
    return mat_mul(X, Y, mod)


# ── Verification ─────────────────────────────────────────────────────────────

def represented_product_coefficients(g: DotGadget, a: int, b: int, c: int, d: int) -> np.ndarray:
    """Coefficient of x_ab·y_cd in every entry (i, j) of D: M_ai·M_bc·M_dj."""
    M = g.M
    return np.outer(M[a, :], M[d, :]) % g.mod.m * int(M[b, c]) % g.mod.m


def verify_represented_product(g: DotGadget) -> RepClassification:
    """Closed form over the three independent index pairs (a,i), (b,c), (d,j)."""
    return classify_product_table(g.M, 3, g.mod)


def probe_represented_product(g: DotGadget) -> MatrixRepReport:
    """Full n⁴ elementary-matrix sweep of matmul_represent."""
    return probe_product_rep(lambda X, Y: matmul_represent(X, Y, g, OpTally()), g.n, g.mod)


def symbolic_naive_product(n: int, m: int) -> PolyGrid:
    arity = 2 * n * n
    return grid_product(symbolic_matrix(n, m, arity), symbolic_matrix(n, m, arity, offset=n * n))


def symbolic_represented_product(g: DotGadget) -> PolyGrid:
    """Entry polynomials of matmul_represent, expanded symbolically (small n only)."""
    n, m, mod = g.n, g.mod.m, g.mod
    arity = 2 * n * n
    X = symbolic_matrix(n, m, arity)
    Y = symbolic_matrix(n, m, arity, offset=n * n)
    P = const_times_grid(mat_transpose(g.B, mod), X)
    Q = grid_times_const(Y, g.B)
    L = grid_times_const(P, g.B)
    R = const_times_grid(mat_transpose(g.C, mod), Q)
    W = grid_product(L, R)
    return grid_times_const(const_times_grid(g.C, W), mat_transpose(g.C, mod))
