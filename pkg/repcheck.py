"""
repcheck.py
───────────
Classification of candidate polynomials / matrices against a target modulo a
composite m: exact, alternative, 0-a-strong and 1-a-strong.

For each monomial I with target coefficient a_I and candidate coefficient b_I:

    alternative   ∃ i : a_I ≡ b_I (mod q_i)
    0-a-strong    alternative, and b_I ≡ 0 (mod q_i) wherever a_I ≢ b_I (mod q_i)
    1-a-strong    alternative, and a_I ≡ 0 (mod m) wherever any q_i disagrees
    exact         a_I ≡ b_I (mod m)

Three routes lead to the same flags:
  - literal       : SparsePoly entries, classify_poly / verify_matrix_rep / verify_product_rep
  - probes        : evaluate a black-box (bi)linear map on elementary matrices
  - closed form   : classify_product_table, for coefficient families that are
                    products of entries of one constant matrix M
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from errors import (
    ArityMismatchError,
    DimensionMismatchError,
    InvalidInputError,
    NonLinearEntryError,
)
from zmod import Modulus

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]

FLAG_ORDER = ("alternative", "one_a_strong", "zero_a_strong", "exact")


# ── Sparse polynomials ───────────────────────────────────────────────────────

@dataclass(frozen=True, eq=True)
class SparsePoly:
    """
    Polynomial over Z_m in variables 0 .. arity-1.
    ``terms`` maps a sorted tuple of variable indices (a multiset; () is the
    constant) to a nonzero residue.
    """

    arity: int
    m: int
    terms: Mapping[Monomial, int] = field(default_factory=dict)

    # terms is a dict; polynomials compare by value but are not hashable
    __hash__ = None

    @classmethod
    def from_terms(cls, arity: int, m: int, terms) -> "SparsePoly":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Monomial, int] = {}
        for mono, coeff in items:
            key = tuple(sorted(int(v) for v in mono))
            if key and (key[0] < 0 or key[-1] >= arity):
                raise ArityMismatchError(f"monomial {key} outside arity {arity}")
            acc[key] = (acc.get(key, 0) + int(coeff)) % m
        return cls(arity, m, {k: v for k, v in sorted(acc.items()) if v})

    @classmethod
    def zero(cls, arity: int, m: int) -> "SparsePoly":
        return cls(arity, m, {})

    @classmethod
    def variable(cls, index: int, arity: int, m: int) -> "SparsePoly":
        return cls.from_terms(arity, m, {(index,): 1})

    @classmethod
    def linear(cls, coeffs: Mapping[int, int], arity: int, m: int) -> "SparsePoly":
        return cls.from_terms(arity, m, {(v,): c for v, c in coeffs.items()})

    def _check_compatible(self, other: "SparsePoly"):
        if self.arity != other.arity or self.m != other.m:
            raise ArityMismatchError(
                f"cannot combine polynomials over ({self.arity} vars, Z_{self.m}) "
                f"and ({other.arity} vars, Z_{other.m})"
            )

    def coefficient(self, mono: Monomial) -> int:
        return self.terms.get(tuple(sorted(mono)), 0)

    def support(self) -> List[Monomial]:
        return sorted(self.terms)

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def scale(self, c: int) -> "SparsePoly":
        return SparsePoly.from_terms(self.arity, self.m, {k: v * c for k, v in self.terms.items()})

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_compatible(other)
        return SparsePoly.from_terms(
            self.arity, self.m, itertools.chain(self.terms.items(), other.terms.items())
        )

    def __neg__(self) -> "SparsePoly":
        return self.scale(-1)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_compatible(other)
        products = (
            (k1 + k2, v1 * v2)
            for k1, v1 in self.terms.items()
            for k2, v2 in other.terms.items()
        )
        return SparsePoly.from_terms(self.arity, self.m, products)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms.items():
            body = "*".join(f"v{v}" for v in mono) or "1"
            parts.append(body if c == 1 and mono else f"{c}*{body}" if mono else str(c))
        return " + ".join(parts)


# ── Classification results ───────────────────────────────────────────────────

@dataclass(frozen=True)
class Witness:
    """First offending monomial for a flag, with its (target, candidate) coefficients."""
    monomial: Monomial
    target: int
    candidate: int


@dataclass(frozen=True)
class RepClassification:
    is_exact: bool
    is_alternative: bool
    is_zero_a_strong: bool
    is_one_a_strong: bool
    witnesses: Mapping[str, Witness] = field(default_factory=dict)

    @property
    def witness(self) -> Optional[Witness]:
        """Witness of the weakest failing flag (alternative first)."""
        for flag in FLAG_ORDER:
            if flag in self.witnesses:
                return self.witnesses[flag]
        return None

    def flags(self) -> Dict[str, bool]:
        return {
            "exact":         self.is_exact,
            "alternative":   self.is_alternative,
            "zero_a_strong": self.is_zero_a_strong,
            "one_a_strong":  self.is_one_a_strong,
        }

    def strongest(self) -> str:
        if self.is_exact:
            return "exact"
        if self.is_one_a_strong and self.is_zero_a_strong:
            return "0/1-a-strong"
        if self.is_one_a_strong:
            return "1-a-strong"
        if self.is_zero_a_strong:
            return "0-a-strong"
        if self.is_alternative:
            return "alternative"
        return "none"

    def combine(self, other: "RepClassification") -> "RepClassification":
        """Conjunction; keeps the first witness seen for each flag."""
        merged = dict(other.witnesses)
        merged.update(self.witnesses)
        return RepClassification(
            self.is_exact and other.is_exact,
            self.is_alternative and other.is_alternative,
            self.is_zero_a_strong and other.is_zero_a_strong,
            self.is_one_a_strong and other.is_one_a_strong,
            merged,
        )


ALL_TRUE = RepClassification(True, True, True, True)


def _flag_arrays(a: np.ndarray, b: np.ndarray, mod: Modulus) -> Dict[str, np.ndarray]:
    a = np.asarray(a, dtype=np.int64) % mod.m
    b = np.asarray(b, dtype=np.int64) % mod.m
    agree = np.stack([(a - b) % q == 0 for q in mod.q])
    b_vanishes = np.stack([b % q == 0 for q in mod.q])
    alternative = agree.any(axis=0)
    exact = agree.all(axis=0)
    return {
        "alternative":   alternative,
        "zero_a_strong": alternative & (agree | b_vanishes).all(axis=0),
        "one_a_strong":  alternative & (exact | (a == 0)),
        "exact":         exact,
    }


def _classify_flat(a: np.ndarray, b: np.ndarray, monomials: Sequence[Monomial],
                   mod: Modulus) -> RepClassification:
    """``a``, ``b`` aligned 1-D coefficient vectors; ``monomials`` already in witness order."""
    if len(a) == 0:
        return ALL_TRUE
    flags = _flag_arrays(a, b, mod)
    witnesses = {}
    for name, ok in flags.items():
        bad = np.flatnonzero(~ok)
        if bad.size:
            k = int(bad[0])
            witnesses[name] = Witness(tuple(monomials[k]), int(a[k] % mod.m), int(b[k] % mod.m))
    return RepClassification(
        bool(flags["exact"].all()),
        bool(flags["alternative"].all()),
        bool(flags["zero_a_strong"].all()),
        bool(flags["one_a_strong"].all()),
        witnesses,
    )


def classify_poly(f: SparsePoly, g: SparsePoly, mod: Modulus) -> RepClassification:
    """Classify candidate g against target f over the union of their supports."""
    if f.arity != g.arity:
        raise ArityMismatchError(f"arity mismatch: target has {f.arity} vars, candidate {g.arity}")
    if f.m != mod.m or g.m != mod.m:
        raise ArityMismatchError(f"polynomials over Z_{f.m} / Z_{g.m} classified modulo {mod.m}")
    monomials = sorted(set(f.terms) | set(g.terms))
    a = np.array([f.terms.get(k, 0) for k in monomials], dtype=np.int64)
    b = np.array([g.terms.get(k, 0) for k in monomials], dtype=np.int64)
    return _classify_flat(a, b, monomials, mod)


def classify_arrays(target: np.ndarray, candidate: np.ndarray, mod: Modulus) -> RepClassification:
    """
    Classify aligned coefficient arrays. Witness monomials are the array
    indices of the first offending entry in row-major order.
    """
    target = np.asarray(target)
    candidate = np.asarray(candidate)
    if target.shape != candidate.shape:
        raise DimensionMismatchError(f"coefficient shapes differ: {target.shape} vs {candidate.shape}")
    index = list(np.ndindex(target.shape)) if target.size <= 4096 else _LazyIndex(target.shape)
    return _classify_flat(target.ravel(), candidate.ravel(), index, mod)


class _LazyIndex:
    """Sequence of row-major multi-indices without materializing them."""

    def __init__(self, shape):
        self.shape = shape

    def __getitem__(self, k):
        return tuple(int(v) for v in np.unravel_index(k, self.shape))


# ── Matrix representations (literal route) ───────────────────────────────────

@dataclass(frozen=True)
class MatrixRepReport:
    entries: List[List[RepClassification]]
    aggregate: RepClassification
    first_failure: Optional[Tuple[int, int]] = None

    @property
    def is_one_a_strong(self) -> bool:
        return self.aggregate.is_one_a_strong

    @property
    def is_exact(self) -> bool:
        return self.aggregate.is_exact


def _aggregate(entries: List[List[RepClassification]]) -> MatrixRepReport:
    aggregate = ALL_TRUE
    first_failure = None
    for i, row in enumerate(entries):
        for j, cls in enumerate(row):
            if first_failure is None and not all(cls.flags().values()):
                first_failure = (i, j)
            aggregate = aggregate.combine(cls)
    return MatrixRepReport(entries, aggregate, first_failure)


def _square_grid(candidate: Sequence[Sequence[SparsePoly]]) -> int:
    n = len(candidate)
    if n == 0 or any(len(row) != n for row in candidate):
        raise DimensionMismatchError("candidate must be a non-empty n x n grid of polynomials")
    return n


def x_var(i: int, j: int, n: int) -> int:
    return i * n + j


def y_var(i: int, j: int, n: int) -> int:
    return n * n + i * n + j


def verify_matrix_rep(candidate: Sequence[Sequence[SparsePoly]], mod: Modulus) -> MatrixRepReport:
    """Entry (i, j) of a linear candidate classified against the variable x_ij."""
    n = _square_grid(candidate)
    entries = []
    for i, row in enumerate(candidate):
        out_row = []
        for j, poly in enumerate(row):
            if poly.degree > 1:
                raise NonLinearEntryError(f"entry ({i}, {j}) has degree {poly.degree}")
            target = SparsePoly.variable(x_var(i, j, n), poly.arity, mod.m)
            out_row.append(classify_poly(target, poly, mod))
        entries.append(out_row)
    return _aggregate(entries)


def product_target(i: int, j: int, n: int, arity: int, m: int) -> SparsePoly:
    """Σ_k x_ik y_kj."""
    return SparsePoly.from_terms(arity, m, {(x_var(i, k, n), y_var(k, j, n)): 1 for k in range(n)})


def verify_product_rep(candidate: Sequence[Sequence[SparsePoly]], mod: Modulus) -> MatrixRepReport:
    """Entry (i, j) of a bilinear candidate classified against Σ_k x_ik y_kj."""
    n = _square_grid(candidate)
    split = n * n
    entries = []
    for i, row in enumerate(candidate):
        out_row = []
        for j, poly in enumerate(row):
            if poly.arity < 2 * split:
                raise ArityMismatchError(f"entry ({i}, {j}) has {poly.arity} vars, need {2 * split}")
            for mono in poly.terms:
                if len(mono) != 2 or not (mono[0] < split <= mono[1] < 2 * split):
                    raise NonLinearEntryError(f"entry ({i}, {j}) is not bilinear: monomial {mono}")
            out_row.append(classify_poly(product_target(i, j, n, poly.arity, mod.m), poly, mod))
        entries.append(out_row)
    return _aggregate(entries)


# ── Symbolic matrices ────────────────────────────────────────────────────────

PolyGrid = List[List[SparsePoly]]


def symbolic_matrix(n: int, m: int, arity: int, offset: int = 0) -> PolyGrid:
    """n×n grid whose (i, j) entry is the variable offset + i*n + j."""
    return [[SparsePoly.variable(offset + i * n + j, arity, m) for j in range(n)] for i in range(n)]


def const_times_grid(K: np.ndarray, P: PolyGrid) -> PolyGrid:
    """K · P for a constant matrix K."""
    if K.shape[1] != len(P):
        raise DimensionMismatchError(f"cannot multiply {K.shape} by a {len(P)}-row grid")
    zero = SparsePoly.zero(P[0][0].arity, P[0][0].m)
    out = []
    for i in range(K.shape[0]):
        row = []
        for j in range(len(P[0])):
            acc = zero
            for k in range(K.shape[1]):
                if K[i, k]:
                    acc = acc + P[k][j].scale(int(K[i, k]))
            row.append(acc)
        out.append(row)
    return out


def grid_times_const(P: PolyGrid, K: np.ndarray) -> PolyGrid:
    """P · K for a constant matrix K."""
    transposed = [list(col) for col in zip(*P)]
    return [list(col) for col in zip(*const_times_grid(K.T, transposed))]


def grid_product(P: PolyGrid, Q: PolyGrid) -> PolyGrid:
    """Symbolic P · Q (bilinear expansion)."""
    if len(P[0]) != len(Q):
        raise DimensionMismatchError("inner dimensions of symbolic product differ")
    zero = SparsePoly.zero(P[0][0].arity, P[0][0].m)
    out = []
    for i in range(len(P)):
        row = []
        for j in range(len(Q[0])):
            acc = zero
            for k in range(len(Q)):
                acc = acc + P[i][k] * Q[k][j]
            row.append(acc)
        out.append(row)
    return out


def coefficient_matrix(poly: SparsePoly, n: int) -> np.ndarray:
    """Coefficients a_ij of x_i y_j for a bilinear poly in x_0..x_{n-1}, y_0..y_{n-1}."""
    if poly.arity != 2 * n:
        raise ArityMismatchError(f"expected {2 * n} variables, got {poly.arity}")
    A = np.zeros((n, n), dtype=np.int64)
    for mono, c in poly.terms.items():
        if len(mono) != 2 or not (mono[0] < n <= mono[1]):
            raise NonLinearEntryError(f"monomial {mono} is not of the form x_i y_j")
        A[mono[0], mono[1] - n] = c
    return A


def bilinear_poly(A: np.ndarray, m: int) -> SparsePoly:
    """Σ A_ij x_i y_j over 2n variables."""
    n = A.shape[0]
    return SparsePoly.from_terms(
        2 * n, m, {(i, n + j): int(A[i, j]) for i in range(n) for j in range(n) if A[i, j] % m}
    )


# ── Probes (black-box route) ─────────────────────────────────────────────────

BilinearEvaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]
LinearEvaluator = Callable[[np.ndarray], np.ndarray]


def elementary(n: int, a: int, b: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=np.int64)
    E[a, b] = 1
    return E


def coefficient_probe(evaluator: BilinearEvaluator, n: int, a: int, b: int, c: int, d: int,
                      mod: Modulus) -> np.ndarray:
    """Coefficient of x_ab y_cd in every output entry: evaluator(E_ab, E_cd)."""
    if not all(0 <= v < n for v in (a, b, c, d)):
        raise InvalidInputError(f"probe indices {(a, b, c, d)} out of range for n={n}")
    return np.asarray(evaluator(elementary(n, a, b), elementary(n, c, d)), dtype=np.int64) % mod.m


class _EntryAccumulator:
    """Per-entry running conjunction of flags with first witnesses."""

    def __init__(self, n: int):
        self.n = n
        self.ok = {name: np.ones((n, n), dtype=bool) for name in FLAG_ORDER}
        self.witness: Dict[str, Dict[Tuple[int, int], Witness]] = {name: {} for name in FLAG_ORDER}

    def update(self, target: np.ndarray, result: np.ndarray, monomial: Monomial, mod: Modulus):
        flags = _flag_arrays(target, result, mod)
        for name, ok in flags.items():
            newly_bad = self.ok[name] & ~ok
            if newly_bad.any():
                for i, j in zip(*np.nonzero(newly_bad)):
                    self.witness[name][(int(i), int(j))] = Witness(
                        monomial, int(target[i, j]), int(result[i, j])
                    )
                self.ok[name] &= ok

    def report(self) -> MatrixRepReport:
        entries = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                row.append(RepClassification(
                    bool(self.ok["exact"][i, j]),
                    bool(self.ok["alternative"][i, j]),
                    bool(self.ok["zero_a_strong"][i, j]),
                    bool(self.ok["one_a_strong"][i, j]),
                    {name: w[(i, j)] for name, w in self.witness.items() if (i, j) in w},
                ))
            entries.append(row)
        return _aggregate(entries)


def probe_product_rep(evaluator: BilinearEvaluator, n: int, mod: Modulus) -> MatrixRepReport:
    """Full n^4 sweep: classify every x_ab y_cd coefficient of every entry against XY."""
    acc = _EntryAccumulator(n)
    target = np.zeros((n, n), dtype=np.int64)
    for a, b, c, d in itertools.product(range(n), repeat=4):
        result = coefficient_probe(evaluator, n, a, b, c, d, mod)
        target[:] = 0
        if b == c:
            target[a, d] = 1
        acc.update(target, result, (x_var(a, b, n), y_var(c, d, n)), mod)
    logger.debug("probe sweep over %d bilinear basis pairs done", n ** 4)
    return acc.report()


def probe_linear_rep(linear_map: LinearEvaluator, n: int, mod: Modulus) -> MatrixRepReport:
    """Classify a linear matrix map against the identity by probing every E_kl."""
    acc = _EntryAccumulator(n)
    for k, l in itertools.product(range(n), repeat=2):
        E = elementary(n, k, l)
        result = np.asarray(linear_map(E), dtype=np.int64) % mod.m
        acc.update(E, result, (x_var(k, l, n),), mod)
    return acc.report()


def polys_from_probes(evaluator: BilinearEvaluator, n: int, mod: Modulus) -> PolyGrid:
    """Rebuild the bilinear entry polynomials of a black-box product from probes."""
    terms = [[{} for _ in range(n)] for _ in range(n)]
    for a, b, c, d in itertools.product(range(n), repeat=4):
        result = coefficient_probe(evaluator, n, a, b, c, d, mod)
        mono = (x_var(a, b, n), y_var(c, d, n))
        for i, j in zip(*np.nonzero(result)):
            terms[i][j][mono] = int(result[i, j])
    arity = 2 * n * n
    return [[SparsePoly.from_terms(arity, mod.m, terms[i][j]) for j in range(n)] for i in range(n)]


# ── Closed form ──────────────────────────────────────────────────────────────

def classify_product_table(M: np.ndarray, factors: int, mod: Modulus) -> RepClassification:
    """
    Classify a coefficient family of the form

        coeff = Π_{r=1..factors} M[k_r, l_r],  target = Π_r δ(k_r, l_r),

    where the index pairs (k_r, l_r) range independently over all of n×n.
    Such a family realizes exactly the (target, candidate) pairs
      (1, d_1···d_f)            with every d_r a diagonal value of M, and
      (0, v_1···v_f)            with at least one v_r an off-diagonal value,
    so the classification runs over value tables instead of n^(2·factors)
    coefficients. Witness monomials list the flattened M positions used.
    """
    M = np.asarray(M, dtype=np.int64) % mod.m
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatchError(f"closed form needs a square matrix, got {M.shape}")

    diag_pos: Dict[int, int] = {}
    for i in range(n):
        diag_pos.setdefault(int(M[i, i]), i * n + i)
    off_pos: Dict[int, int] = {}
    off_mask = ~np.eye(n, dtype=bool)
    for flat in np.flatnonzero(off_mask.ravel()):
        off_pos.setdefault(int(M.flat[flat]), int(flat))

    labelled = [(v, p, False) for v, p in diag_pos.items()] + [(v, p, True) for v, p in off_pos.items()]
    rows = []
    for combo in itertools.product(labelled, repeat=factors):
        is_off = any(lbl for _, _, lbl in combo)
        value = 1
        for v, _, _ in combo:
            value = value * v % mod.m
        rows.append((tuple(p for _, p, _ in combo), 0 if is_off else 1, value))
    rows.sort()
    a = np.array([r[1] for r in rows], dtype=np.int64)
    b = np.array([r[2] for r in rows], dtype=np.int64)
    return _classify_flat(a, b, [r[0] for r in rows], mod)
