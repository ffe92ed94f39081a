"""
gadget.py
─────────
Dot-product gadgets (B, C, t) over Z_m.

A gadget is a pair of n×t matrices whose product M = B·C^T has a unit
diagonal and off-diagonal entries that, modulo every prime-power divisor q_i
of m, are either 0 or 1 with at least one 0. Then

    Σ_j (B_{·j} · x)(C_{·j} · y)

is a 1-a-strong representation of Σ_i x_i y_i using t products instead of n.

For m = 6 the admissible off-diagonal values are 4 (vanishes mod 2),
3 (vanishes mod 3) and 0 (vanishes mod both).

Provides:
  - class_values / off_diagonal_classes : the CRT-lifted class residues
  - GadgetTarget        : validated target matrix M with its class map
  - DotGadget           : (B, C, t) validated on construction
  - trivial / from_target / block_partition / kronecker_compose / kronecker_power
  - inspect_matrices    : non-raising validity report for raw (B, C)
  - dot_poly / dot_target_poly / sn2_poly
  - gadget_to_sn2 / sn2_to_gadget
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from errors import (
    DimensionMismatchError,
    InvalidInputError,
    InvalidModulusError,
    InvalidTargetError,
    UnsupportedRingError,
)
from repcheck import SparsePoly, bilinear_poly, classify_poly
from zmod import (
    Modulus,
    crt_lift,
    crt_lift_arrays,
    identity,
    mat_kron,
    mat_mul,
    mat_transpose,
    rank_factorize_modp,
)

logger = logging.getLogger(__name__)


# ── Class values ─────────────────────────────────────────────────────────────

def off_diagonal_classes(mod: Modulus) -> Dict[FrozenSet[int], int]:
    """
    Every admissible off-diagonal residue, keyed by the set of primes it
    vanishes modulo. It is ≡ 1 modulo the remaining q_j. The full prime set
    maps to 0 (the zero class).
    """
    primes = mod.primes
    classes = {}
    for size in range(1, len(primes) + 1):
        for subset in itertools.combinations(range(len(primes)), size):
            residues = [0 if i in subset else 1 for i in range(len(primes))]
            classes[frozenset(primes[i] for i in subset)] = crt_lift(residues, mod)
    return classes


def class_values(mod: Modulus) -> Dict[int, int]:
    """u_p: ≡ 0 (mod q_p), ≡ 1 modulo every other q. For 6 → {2: 4, 3: 3}."""
    classes = off_diagonal_classes(mod)
    return {p: classes[frozenset({p})] for p in mod.primes}


def _entry_vanishing(value: int, mod: Modulus) -> Optional[FrozenSet[int]]:
    """Primes an off-diagonal value vanishes modulo, or None if it is not admissible."""
    vanish = []
    for p, q in zip(mod.primes, mod.q):
        r = value % q
        if r == 0:
            vanish.append(p)
        elif r != 1:
            return None
    return frozenset(vanish) if vanish else None


def target_violation(M: np.ndarray, mod: Modulus) -> Optional[Tuple[int, int, int, str]]:
    """First (row, col, value, reason) breaking the target invariants, row-major; None if valid."""
    M = np.asarray(M, dtype=np.int64) % mod.m
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        return (-1, -1, 0, f"target must be a non-empty square matrix, got shape {M.shape}")
    admissible = sorted(off_diagonal_classes(mod).values())
    eye = np.eye(M.shape[0], dtype=bool)
    ok = np.where(eye, M == 1, np.isin(M, admissible))
    bad = np.argwhere(~ok)
    if bad.size == 0:
        return None
    k, l = int(bad[0][0]), int(bad[0][1])
    reason = "diagonal entry is not 1" if k == l else "off-diagonal entry is not in a vanishing class"
    return (k, l, int(M[k, l]), reason)


# ── Target ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class GadgetTarget:
    """n×n matrix with unit diagonal and classed off-diagonal entries."""

    mod: Modulus
    M: np.ndarray

    @classmethod
    def from_matrix(cls, M, mod: Modulus) -> "GadgetTarget":
        M = np.asarray(M, dtype=np.int64) % mod.m
        bad = target_violation(M, mod)
        if bad is not None:
            k, l, v, reason = bad
            raise InvalidTargetError(f"{reason} at ({k}, {l}): value {v} mod {mod.m}")
        M.setflags(write=False)
        return cls(mod, M)

    @classmethod
    def from_assignment(cls, codes: np.ndarray, classes: Tuple[int, ...], mod: Modulus) -> "GadgetTarget":
        """Build M from per-position class codes indexing ``classes``; the diagonal is forced to 1."""
        table = np.asarray(classes, dtype=np.int64)
        M = table[np.asarray(codes)]
        np.fill_diagonal(M, 1)
        return cls.from_matrix(M, mod)

    @property
    def n(self) -> int:
        return self.M.shape[0]

    def class_of(self, k: int, l: int) -> Optional[FrozenSet[int]]:
        """Primes the (k, l) entry vanishes modulo; None on the diagonal."""
        if k == l:
            return None
        return _entry_vanishing(int(self.M[k, l]), self.mod)

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.M, self.M.T))

    def ranks(self) -> Dict[int, int]:
        """GF(p) rank of M for each prime p of a square-free modulus."""
        _require_square_free(self.mod)
        return {p: rank_factorize_modp(self.M, p, self.mod).rank for p in self.mod.primes}


def _require_square_free(mod: Modulus):
    if not mod.square_free:
        raise UnsupportedRingError(
            f"{mod} is not square-free; rank factorization needs prime fields"
        )


# ── Gadget ───────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class DotGadget:
    mod: Modulus
    n: int
    t: int
    B: np.ndarray
    C: np.ndarray
    recipe: str = "manual"

    def __post_init__(self):
        B = np.asarray(self.B, dtype=np.int64) % self.mod.m
        C = np.asarray(self.C, dtype=np.int64) % self.mod.m
        if self.n < 1 or self.t < 1:
            raise DimensionMismatchError(f"gadget needs n, t >= 1, got n={self.n}, t={self.t}")
        if B.shape != (self.n, self.t) or C.shape != (self.n, self.t):
            raise DimensionMismatchError(
                f"B {B.shape} and C {C.shape} must both be ({self.n}, {self.t})"
            )
        B.setflags(write=False)
        C.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        # raises InvalidTargetError on an invalid product
        _ = self.target

    @cached_property
    def M(self) -> np.ndarray:
        M = mat_mul(self.B, mat_transpose(self.C, self.mod), self.mod)
        M.setflags(write=False)
        return M

    @cached_property
    def target(self) -> GadgetTarget:
        return GadgetTarget.from_matrix(self.M, self.mod)

    def same_target(self, other: "DotGadget") -> bool:
        return self.mod.m == other.mod.m and np.array_equal(self.M, other.M)

    def __str__(self):
        return f"DotGadget(n={self.n}, t={self.t}, m={self.mod.m}, recipe={self.recipe})"


# ── Constructors ─────────────────────────────────────────────────────────────

def trivial(n: int, mod: Modulus) -> DotGadget:
    """B = C = I_n: the exact dot product."""
    if n < 1:
        raise DimensionMismatchError(f"n must be >= 1, got {n}")
    return DotGadget(mod, n, n, identity(n), identity(n), recipe=f"trivial(n={n})")


def from_target(target: GadgetTarget, recipe: Optional[str] = None) -> DotGadget:
    """
    Rank-factorize M modulo each prime, right-pad every factor pair with zero
    columns to t = max rank, and CRT-lift the padded factors into Z_m.
    """
    mod = target.mod
    _require_square_free(mod)
    factors = [rank_factorize_modp(target.M, p, mod) for p in mod.primes]
    t = max(f.rank for f in factors)
    pad = lambda a: np.pad(a, ((0, 0), (0, t - a.shape[1])))
    B = crt_lift_arrays([pad(f.B) for f in factors], mod)
    C = crt_lift_arrays([pad(f.C) for f in factors], mod)
    ranks = ", ".join(f"{p}:{f.rank}" for p, f in zip(mod.primes, factors))
    logger.debug("from_target n=%d ranks {%s} -> t=%d", target.n, ranks, t)
    return DotGadget(mod, target.n, t, B, C, recipe=recipe or f"target(n={target.n})")


def block_target(n: int, s: int, mod: Modulus) -> GadgetTarget:
    """Intra-block entries vanish mod q_1, inter-block entries vanish mod q_2."""
    if len(mod.factors) != 2:
        raise InvalidModulusError(
            f"block partition needs a modulus with exactly 2 prime-power factors, got {mod}"
        )
    if s < 1 or n < 1 or n % s:
        raise InvalidInputError(f"block size {s} must divide n={n}")
    u = class_values(mod)
    p1, p2 = mod.primes
    blocks = np.arange(n) // s
    same = blocks[:, None] == blocks[None, :]
    M = np.where(same, u[p1], u[p2]).astype(np.int64)
    np.fill_diagonal(M, 1)
    return GadgetTarget.from_matrix(M, mod)


def block_partition(n: int, s: int, mod: Modulus) -> DotGadget:
    return from_target(block_target(n, s, mod), recipe=f"block(n={n},s={s})")


def kronecker_compose(g1: DotGadget, g2: DotGadget) -> DotGadget:
    """(B1⊗B2)(C1⊗C2)^T = M1⊗M2, and {1} ∪ admissible values is closed under products."""
    if g1.mod.m != g2.mod.m:
        raise DimensionMismatchError(f"cannot compose gadgets over Z_{g1.mod.m} and Z_{g2.mod.m}")
    mod = g1.mod
    return DotGadget(
        mod,
        g1.n * g2.n,
        g1.t * g2.t,
        mat_kron(g1.B, g2.B, mod),
        mat_kron(g1.C, g2.C, mod),
        recipe=f"kron({g1.recipe},{g2.recipe})",
    )


def kronecker_power(g: DotGadget, k: int) -> DotGadget:
    if k < 1:
        raise InvalidInputError(f"Kronecker power must be >= 1, got {k}")
    if k == 1:
        return g
    B, C = g.B, g.C
    for _ in range(k - 1):
        B = mat_kron(B, g.B, g.mod)
        C = mat_kron(C, g.C, g.mod)
    return DotGadget(g.mod, g.n ** k, g.t ** k, B, C, recipe=f"({g.recipe})^{k}")


# ── Inspection of raw matrices ───────────────────────────────────────────────

@dataclass(frozen=True)
class GadgetInspection:
    valid: bool
    n: int
    t: int
    reason: Optional[str] = None
    position: Optional[Tuple[int, int]] = None
    value: Optional[int] = None


def inspect_matrices(B, C, mod: Modulus) -> GadgetInspection:
    """Validity report for a (B, C) pair without raising."""
    B = np.asarray(B, dtype=np.int64)
    C = np.asarray(C, dtype=np.int64)
    if B.ndim != 2 or B.shape != C.shape or 0 in B.shape:
        return GadgetInspection(False, 0, 0, f"B {B.shape} and C {C.shape} must be equal n×t shapes")
    n, t = B.shape
    M = mat_mul(B % mod.m, mat_transpose(C, mod), mod)
    bad = target_violation(M, mod)
    if bad is None:
        return GadgetInspection(True, n, t)
    k, l, v, reason = bad
    return GadgetInspection(False, n, t, reason, (k, l), v)


# ── Polynomials ──────────────────────────────────────────────────────────────

def dot_target_poly(n: int, m: int) -> SparsePoly:
    """Σ_i x_i y_i over x_0..x_{n-1}, y_0..y_{n-1}."""
    return bilinear_poly(np.eye(n, dtype=np.int64), m)


def sn2_poly(n: int, m: int) -> SparsePoly:
    """S_n² = Σ_{i≠j} x_i y_j."""
    return bilinear_poly(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64), m)


def dot_poly(g: DotGadget) -> SparsePoly:
    """Σ_j (B_{·j}·x)(C_{·j}·y); the x_k y_l coefficient is (B C^T)_{kl}."""
    return bilinear_poly(g.M, g.mod.m)


def gadget_to_sn2(g: DotGadget) -> SparsePoly:
    """(Σx)(Σy) − dot_poly(g): a 0-a-strong representation of S_n²."""
    J = np.ones((g.n, g.n), dtype=np.int64)
    return bilinear_poly((J - g.M) % g.mod.m, g.mod.m)


def sn2_to_gadget(A, mod: Modulus) -> DotGadget:
    """
    Gadget from the coefficient matrix A of a 0-a-strong representation of
    S_n²: the target is J − A.
    """
    A = np.asarray(A, dtype=np.int64) % mod.m
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DimensionMismatchError(f"coefficient matrix must be square, got {A.shape}")
    n = A.shape[0]
    cls = classify_poly(sn2_poly(n, mod.m), bilinear_poly(A, mod.m), mod)
    if not cls.is_zero_a_strong:
        w = cls.witnesses["zero_a_strong"]
        raise InvalidInputError(
            f"not a 0-a-strong representation of S_n^2: monomial {w.monomial} "
            f"has coefficient {w.candidate}, target {w.target}",
            witness=w,
        )
    M = (np.ones((n, n), dtype=np.int64) - A) % mod.m
    return from_target(GadgetTarget.from_matrix(M, mod), recipe=f"sn2(n={n})")
