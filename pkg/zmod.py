"""
zmod.py
───────
Exact arithmetic over Z_m for modrep.

Provides:
  - Modulus             : m with its prime-power factorization q_i = p_i^e_i
  - factorize()         : canonical factorization, primes ascending
  - crt_lift()          : residues mod q_i  →  residue mod m
  - mat_*/mat_algebra() : add, multiply, transpose, kronecker, scalar-multiply
  - rank_factorize_modp : M ≡ B_p C_p^T (mod p) with inner width = GF(p) rank

Residue matrices are plain ``np.ndarray`` of dtype int64 with every entry in
[0, m). Moduli are capped at MAX_MODULUS = 2**31 so that a single product of
two residues stays below 2**62; matrix products are accumulated in chunks
small enough that no partial sum can leave int64 before it is reduced.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from errors import (
    DimensionMismatchError,
    InvalidModulusError,
    MatrixFormatError,
    UnsupportedRingError,
)

logger = logging.getLogger(__name__)

# Residue matrices are ndarrays; the alias documents intent in signatures.
ResidueMatrix = np.ndarray

_ACCUMULATOR_BOUND = 2 ** 62

# (m - 1)**2 and m * q_i must both fit under _ACCUMULATOR_BOUND.
MAX_MODULUS = 2 ** 31


def _check_size(m: int):
    if m > MAX_MODULUS:
        raise InvalidModulusError(
            f"modulus {m} exceeds the int64-safe limit MAX_MODULUS = 2**31 = {MAX_MODULUS}"
        )


@dataclass(frozen=True)
class Modulus:
    """Composite (or prime-power) modulus with its canonical factorization."""

    m: int
    factors: tuple  # ((p_1, e_1), (p_2, e_2), ...) with p ascending

    def __post_init__(self):
        if self.m < 2:
            raise InvalidModulusError(f"modulus must be >= 2, got {self.m}")
        _check_size(self.m)
        primes = [p for p, _ in self.factors]
        if len(set(primes)) != len(primes):
            raise InvalidModulusError(f"repeated prime in factorization {self.factors}")
        if math.prod(p ** e for p, e in self.factors) != self.m:
            raise InvalidModulusError(f"factors {self.factors} do not multiply to {self.m}")

    @property
    def primes(self) -> tuple:
        return tuple(p for p, _ in self.factors)

    @property
    def q(self) -> tuple:
        """Prime-power divisors q_i = p_i^e_i, in factor order."""
        return tuple(p ** e for p, e in self.factors)

    @property
    def non_prime_power(self) -> bool:
        return len(self.factors) >= 2

    @property
    def square_free(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def exponent_of(self, p: int) -> int:
        for prime, e in self.factors:
            if prime == p:
                return e
        return 0

    @cached_property
    def _crt_weights(self) -> tuple:
        # w_i ≡ 1 (mod q_i), ≡ 0 (mod q_j) for j ≠ i
        weights = []
        for q_i in self.q:
            rest = self.m // q_i
            weights.append(rest * pow(rest, -1, q_i) % self.m)
        return tuple(weights)

    def __str__(self):
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        return f"Z_{self.m} ({' * '.join(parts)})"


def factorize(m: int) -> Modulus:
    """Trial-division factorization; factors sorted by prime."""
    if not isinstance(m, (int, np.integer)) or m < 2:
        raise InvalidModulusError(f"modulus must be an integer >= 2, got {m!r}")
    m = int(m)
    _check_size(m)
    factors = []
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            factors.append((p, e))
        p += 1 if p == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return Modulus(m, tuple(factors))


def is_prime(p: int) -> bool:
    return p >= 2 and factorize(p).factors == ((p, 1),)


# ── CRT ──────────────────────────────────────────────────────────────────────

def crt_lift(residues: Sequence[int], mod: Modulus) -> int:
    """Unique r in [0, m) with r ≡ residues[i] (mod q_i)."""
    if len(residues) != len(mod.factors):
        raise DimensionMismatchError(
            f"expected {len(mod.factors)} residues for {mod}, got {len(residues)}"
        )
    return sum(int(r) % q * w for r, q, w in zip(residues, mod.q, mod._crt_weights)) % mod.m


def crt_lift_arrays(components: Sequence[np.ndarray], mod: Modulus) -> ResidueMatrix:
    """Entrywise CRT lift of same-shaped arrays, one per prime-power factor."""
    if len(components) != len(mod.factors):
        raise DimensionMismatchError(
            f"expected {len(mod.factors)} components for {mod}, got {len(components)}"
        )
    shapes = {np.shape(c) for c in components}
    if len(shapes) != 1:
        raise DimensionMismatchError(f"component shapes differ: {sorted(shapes)}")
    out = np.zeros(shapes.pop(), dtype=np.int64)
    for comp, q, w in zip(components, mod.q, mod._crt_weights):
        out = (out + (np.asarray(comp, dtype=np.int64) % q) * w) % mod.m
    return out


# ── Residue matrices ─────────────────────────────────────────────────────────

def as_residue_matrix(values, mod: Modulus) -> ResidueMatrix:
    """Validate a 2-D integer array and reduce it into [0, m)."""
    arr = np.asarray(values)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise MatrixFormatError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise MatrixFormatError(f"matrix entries must be integers, got dtype {arr.dtype}")
    return arr.astype(np.int64) % mod.m


def identity(n: int) -> ResidueMatrix:
    return np.eye(n, dtype=np.int64)


def _inner_chunk(m: int) -> int:
    return max(1, _ACCUMULATOR_BOUND // max(1, (m - 1) ** 2))


def mat_add(a: ResidueMatrix, b: ResidueMatrix, mod: Modulus) -> ResidueMatrix:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"cannot add {a.shape} and {b.shape}")
    return (a + b) % mod.m


def mat_mul(a: ResidueMatrix, b: ResidueMatrix, mod: Modulus) -> ResidueMatrix:
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    k = a.shape[1]
    chunk = _inner_chunk(mod.m)
    if k <= chunk:
        return (a @ b) % mod.m
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for start in range(0, k, chunk):
        stop = min(start + chunk, k)
        out = (out + a[:, start:stop] @ b[start:stop]) % mod.m
    return out


def mat_chain(mod: Modulus, *factors: ResidueMatrix) -> ResidueMatrix:
    """Left-to-right product of several matrices, reduced after every step."""
    result = factors[0] % mod.m
    for f in factors[1:]:
        result = mat_mul(result, f, mod)
    return result


def mat_transpose(a: ResidueMatrix, mod: Modulus) -> ResidueMatrix:
    return np.ascontiguousarray(a.T) % mod.m


def mat_kron(a: ResidueMatrix, b: ResidueMatrix, mod: Modulus) -> ResidueMatrix:
    return np.kron(a % mod.m, b % mod.m) % mod.m


def mat_scale(c: int, a: ResidueMatrix, mod: Modulus) -> ResidueMatrix:
    return (int(c) % mod.m) * (a % mod.m) % mod.m


_MAT_OPS = {
    "add":             mat_add,
    "multiply":        mat_mul,
    "transpose":       mat_transpose,
    "kronecker":       mat_kron,
    "scalar-multiply": mat_scale,
}


def mat_algebra(op: str, *operands, mod: Modulus) -> ResidueMatrix:
    """Dispatch one of the residue-matrix operations by name."""
    key = op.lower().strip()
    if key not in _MAT_OPS:
        raise ValueError(f"Unknown matrix operation '{op}'. Choose from: {list(_MAT_OPS)}")
    return _MAT_OPS[key](*operands, mod)


# ── Elimination over GF(p) ───────────────────────────────────────────────────

class RankFactorization(NamedTuple):
    B: ResidueMatrix   # rows(M) × rank
    C: ResidueMatrix   # cols(M) × rank
    rank: int


def _check_field(p: int, mod: Modulus = None):
    if mod is not None:
        e = mod.exponent_of(p)
        if e == 0:
            raise InvalidModulusError(f"{p} does not divide {mod.m}")
        if e > 1:
            raise UnsupportedRingError(
                f"elimination over Z_{p}^{e} is not a field algorithm; only square-free primes are supported"
            )
    if not is_prime(p):
        if p >= 2 and len(factorize(p).factors) == 1:
            raise UnsupportedRingError(f"{p} is a prime power, not a prime; elimination needs a field")
        raise InvalidModulusError(f"{p} is not prime")


def row_reduce_modp(M: np.ndarray, p: int):
    """
    Reduced row form of M over GF(p).

    Pivot rule: among the rows not yet used, the first nonzero entry in a
    row-major scan. Returns (R, pivots) where R has one row per pivot,
    R[:, pivots] is the identity, and row space(R) = row space(M).
    """
    R = np.asarray(M, dtype=np.int64) % p
    pivots = []
    r = 0
    while r < R.shape[0]:
        nonzero = np.argwhere(R[r:] != 0)
        if nonzero.size == 0:
            break
        i, c = int(nonzero[0][0]) + r, int(nonzero[0][1])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank_modp(M: np.ndarray, p: int) -> int:
    return len(row_reduce_modp(M, p)[1])


def rank_factorize_modp(M: np.ndarray, p: int, mod: Modulus = None) -> RankFactorization:
    """
    Factor M ≡ B_p · C_p^T (mod p) with inner width equal to rank_GF(p)(M).
    B_p is the pivot columns of M; C_p^T is the reduced row form.
    """
    _check_field(p, mod)
    M = np.asarray(M, dtype=np.int64) % p
    R, pivots = row_reduce_modp(M, p)
    t = len(pivots)
    B_p = M[:, pivots] if t else np.zeros((M.shape[0], 0), dtype=np.int64)
    C_p = np.ascontiguousarray(R.T) if t else np.zeros((M.shape[1], 0), dtype=np.int64)
    logger.debug("rank factorization mod %d: %s -> width %d", p, M.shape, t)
    return RankFactorization(B_p, C_p, t)
