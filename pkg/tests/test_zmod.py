import galois
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DimensionMismatchError, InvalidModulusError, UnsupportedRingError
from gadget import block_partition, block_target, kronecker_power, target_violation
from zmod import (
    MAX_MODULUS,
    Modulus,
    crt_lift,
    crt_lift_arrays,
    factorize,
    identity,
    mat_algebra,
    mat_mul,
    rank_factorize_modp,
    rank_modp,
)

pytestmark = pytest.mark.zmod


def test_factorize_examples():
    m6 = factorize(6)
    assert m6.factors == ((2, 1), (3, 1))
    assert m6.non_prime_power
    assert m6.square_free
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(12).non_prime_power
    assert not factorize(12).square_free
    assert factorize(8).factors == ((2, 3),)
    assert not factorize(8).non_prime_power


@pytest.mark.parametrize("m", [1, 0, -6])
def test_factorize_rejects_small(m):
    with pytest.raises(InvalidModulusError):
        factorize(m)


@given(st.integers(min_value=2, max_value=10 ** 6))
@settings(max_examples=300, deadline=None)
def test_factorization_soundness(m):
    mod = factorize(m)
    assert int(np.prod([p ** e for p, e in mod.factors])) == m
    assert list(mod.primes) == sorted(mod.primes)
    assert len(set(mod.primes)) == len(mod.primes)


def test_crt_examples(mod6):
    assert crt_lift([1, 1], mod6) == 1
    assert crt_lift([0, 1], mod6) == 4
    assert crt_lift([1, 0], mod6) == 3


def test_crt_length_mismatch(mod6):
    with pytest.raises(DimensionMismatchError):
        crt_lift([1], mod6)


@given(st.integers(min_value=2, max_value=10 ** 6), st.integers(min_value=0, max_value=10 ** 9))
@settings(max_examples=300, deadline=None)
def test_crt_round_trip(m, r):
    mod = factorize(m)
    r %= m
    assert crt_lift([r % q for q in mod.q], mod) == r


def test_crt_lift_arrays_matches_scalar(mod6):
    a = np.array([[0, 1], [1, 0]])
    b = np.array([[1, 2], [0, 0]])
    lifted = crt_lift_arrays([a, b], mod6)
    for i in range(2):
        for j in range(2):
            assert lifted[i, j] == crt_lift([a[i, j], b[i, j]], mod6)


def test_mat_algebra_examples(mod6, rng):
    X = rng.integers(0, 6, size=(2, 2))
    assert np.array_equal(mat_algebra("multiply", identity(2), X, mod=mod6), X)
    assert np.array_equal(mat_algebra("add", np.array([[5]]), np.array([[4]]), mod=mod6), [[3]])
    assert np.array_equal(mat_algebra("kronecker", identity(2), identity(3), mod=mod6), identity(6))
    assert np.array_equal(mat_algebra("scalar-multiply", 5, np.array([[2]]), mod=mod6), [[4]])
    assert np.array_equal(mat_algebra("transpose", np.array([[1, 2]]), mod=mod6), [[1], [2]])


def test_mat_algebra_errors(mod6):
    with pytest.raises(DimensionMismatchError):
        mat_algebra("multiply", np.ones((2, 3), dtype=np.int64), np.ones((2, 3), dtype=np.int64), mod=mod6)
    with pytest.raises(DimensionMismatchError):
        mat_algebra("add", np.ones((2, 2), dtype=np.int64), np.ones((3, 3), dtype=np.int64), mod=mod6)
    with pytest.raises(ValueError, match="Unknown matrix operation"):
        mat_algebra("divide", identity(2), identity(2), mod=mod6)


def test_mat_mul_large_modulus_stays_exact(rng):
    mod = factorize(2 ** 31)
    a = rng.integers(0, 2 ** 31, size=(4, 5), dtype=np.int64)
    b = rng.integers(0, 2 ** 31, size=(5, 3), dtype=np.int64)
    expected = (a.astype(object) @ b.astype(object)) % (2 ** 31)
    assert np.array_equal(mat_mul(a, b, mod), expected.astype(np.int64))


@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
@settings(max_examples=50, deadline=None)
def test_kronecker_mixed_product(seed):
    mod = factorize(6)
    r = np.random.default_rng(seed)
    A, C = r.integers(0, 6, (2, 3)), r.integers(0, 6, (3, 2))
    B, D = r.integers(0, 6, (3, 2)), r.integers(0, 6, (2, 4))
    left = mat_algebra("multiply",
                       mat_algebra("kronecker", A, B, mod=mod),
                       mat_algebra("kronecker", C, D, mod=mod), mod=mod)
    right = mat_algebra("kronecker",
                        mat_algebra("multiply", A, C, mod=mod),
                        mat_algebra("multiply", B, D, mod=mod), mod=mod)
    assert np.array_equal(left, right)


def test_rank_factorize_all_ones_mod3():
    B, C, t = rank_factorize_modp(np.ones((3, 3), dtype=np.int64), 3)
    assert t == 1
    assert np.array_equal(B, [[1], [1], [1]])
    assert np.array_equal(C, [[1], [1], [1]])


def test_rank_factorize_identity_mod2():
    assert rank_factorize_modp(identity(3), 2).rank == 3


def test_rank_factorize_block_component(mod6):
    M = block_target(9, 3, mod6).M
    assert rank_factorize_modp(M, 2, mod6).rank == 7
    assert rank_factorize_modp(M, 3, mod6).rank == 3
    GF2 = galois.GF(2)
    assert np.linalg.matrix_rank(GF2(M % 2)) == 7


def test_rank_factorize_rejects_prime_powers():
    M = identity(2)
    with pytest.raises(UnsupportedRingError):
        rank_factorize_modp(M, 2, factorize(12))
    with pytest.raises(UnsupportedRingError):
        rank_factorize_modp(M, 4)
    with pytest.raises(InvalidModulusError):
        rank_factorize_modp(M, 6)


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3])
def test_rank_factorize_random_against_galois(p):
    r = np.random.default_rng(p)
    GF = galois.GF(p)
    for _ in range(500):
        rows, cols = r.integers(1, 13, size=2)
        M = r.integers(0, p, size=(rows, cols), dtype=np.int64)
        B, C, t = rank_factorize_modp(M, p)
        assert np.array_equal((B @ C.T) % p, M)
        assert t == np.linalg.matrix_rank(GF(M))
        assert rank_modp(M, p) == t


def test_rank_factorize_is_deterministic(rng):
    M = rng.integers(0, 3, size=(6, 6), dtype=np.int64)
    first = rank_factorize_modp(M, 3)
    second = rank_factorize_modp(M.copy(), 3)
    assert np.array_equal(first.B, second.B)
    assert np.array_equal(first.C, second.C)


# ── modulus size limit ───────────────────────────────────────────────────────

# 32749 and 65537 are prime; their product sits just under 2**31
LARGE_SQUARE_FREE = 32749 * 65537


def test_modulus_limit_boundary():
    assert factorize(MAX_MODULUS).factors == ((2, 31),)
    assert factorize(LARGE_SQUARE_FREE).factors == ((32749, 1), (65537, 1))
    with pytest.raises(InvalidModulusError, match="2\\*\\*31"):
        factorize(MAX_MODULUS + 1)
    with pytest.raises(InvalidModulusError):
        factorize(2 * 4294967311)
    with pytest.raises(InvalidModulusError):
        Modulus(2 * 4294967311, ((2, 1), (4294967311, 1)))


def test_mat_mul_exact_at_limit():
    mod = factorize(MAX_MODULUS)
    A = np.full((3, 3), MAX_MODULUS - 1, dtype=np.int64)
    # (m - 1)^2 ≡ 1, so every entry is 3
    assert np.array_equal(mat_mul(A, A, mod), np.full((3, 3), 3))


def test_crt_lift_arrays_exact_near_limit():
    mod = factorize(LARGE_SQUARE_FREE)
    comps = [np.array([[q - 1, 1], [0, q // 2]]) for q in mod.q]
    lifted = crt_lift_arrays(comps, mod)
    for i in range(2):
        for j in range(2):
            assert lifted[i, j] == crt_lift([int(c[i, j]) for c in comps], mod)


def test_block_gadget_near_limit():
    mod = factorize(LARGE_SQUARE_FREE)
    g = block_partition(9, 3, mod)
    exact = g.B.astype(object).dot(g.C.T.astype(object)) % mod.m
    assert np.array_equal(exact.astype(np.int64), g.M)
    assert target_violation(g.M, mod) is None
    g2 = kronecker_power(g, 2)
    assert target_violation(g2.M, mod) is None
