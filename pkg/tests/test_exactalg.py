import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arhall.errors import InterpolationError, PreconditionError, SchemaError
from arhall.exactalg import (
    IntPoly,
    LaurentInt,
    MatrixFp,
    PrimeField,
    enumerate_subspaces,
    first_primes,
    gaussian_binomial,
    gl_order,
    interpolate,
    is_prime,
    nullspace,
    rank,
)

from oracles import span, subspaces_bruteforce


def test_primes():
    assert first_primes(6) == [2, 3, 5, 7, 11, 13]
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


@pytest.mark.parametrize("p", [1, 4, 9, 101, 0, -3])
def test_prime_field_rejects(p):
    with pytest.raises((SchemaError, PreconditionError)):
        PrimeField(p)


def test_field_inverse():
    f = PrimeField(7)
    assert all(a * f.inv(a) % 7 == 1 for a in range(1, 7))


def test_rank_examples():
    f2, f3 = PrimeField(2), PrimeField(3)
    assert rank(MatrixFp.identity(2, f2)) == 2
    assert rank(MatrixFp.zeros(3, 4, f3)) == 0
    assert rank(MatrixFp.from_rows([[1, 1], [1, 1]], f2)) == 1


def test_matrix_entries_reduced_and_shapes():
    f = PrimeField(3)
    m = MatrixFp.from_rows([[4, -1, 3]], f)
    assert m.to_rows() == [[1, 2, 0]]
    assert MatrixFp.zeros(0, 3, f).shape == (0, 3)
    assert rank(MatrixFp.zeros(0, 3, f)) == 0
    assert (m.transpose() @ m).shape == (3, 3)


def _rank_bruteforce(rows, ncols, p):
    """Rank as log_p of the size of the row span."""
    s = span([tuple(r) for r in rows], ncols, p) if rows else {()}
    d, size = 0, len(s)
    while size > 1:
        size //= p
        d += 1
    return d


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.sampled_from([2, 3, 5]), st.integers(0, 2**32))
def test_rank_matches_span_size(r, c, p, seed):
    rnd = random.Random(seed)
    rows = [[rnd.randrange(p) for _ in range(c)] for _ in range(r)]
    m = MatrixFp.from_rows(rows, PrimeField(p), c)
    assert rank(m) == (_rank_bruteforce(rows, c, p) if r and c else 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([2, 3, 5, 7]), st.integers(0, 2**32))
def test_rank_invariance(r, c, p, seed):
    rnd = random.Random(seed)
    f = PrimeField(p)
    rows = [[rnd.randrange(p) for _ in range(c)] for _ in range(r)]
    m = MatrixFp.from_rows(rows, f, c)
    base = rank(m)
    perm_r = rnd.sample(range(r), r)
    perm_c = rnd.sample(range(c), c)
    assert rank(MatrixFp.from_rows([[rows[i][j] for j in perm_c] for i in perm_r], f, c)) == base
    # random invertible matrices, found by sampling
    for n, side in ((r, "L"), (c, "R")):
        while True:
            g = MatrixFp.from_rows([[rnd.randrange(p) for _ in range(n)] for _ in range(n)], f, n)
            if rank(g) == n:
                break
        assert rank(g @ m if side == "L" else m @ g) == base


def test_nullspace_annihilates():
    rng = random.Random(1)
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        r, c = rng.randint(1, 4), rng.randint(1, 5)
        rows = [[rng.randrange(p) for _ in range(c)] for _ in range(r)]
        ns = nullspace(rows, c, p)
        assert len(ns) == c - rank(MatrixFp.from_rows(rows, PrimeField(p), c))
        for v in ns:
            assert all(sum(a * b for a, b in zip(row, v)) % p == 0 for row in rows)


@pytest.mark.parametrize("n,k,p,expected", [(2, 1, 2, 3), (3, 1, 2, 7), (3, 0, 5, 1), (0, 0, 3, 1)])
def test_enumerate_subspaces_examples(n, k, p, expected):
    assert sum(1 for _ in enumerate_subspaces(n, k, PrimeField(p))) == expected


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumerate_subspaces_against_spans(n, p):
    f = PrimeField(p)
    for k in range(n + 1):
        got = [span([tuple(r) for r in m.to_rows()], n, p) if k else frozenset({(0,) * n})
               for m in enumerate_subspaces(n, k, f)]
        assert len(got) == len(set(got))
        assert set(got) == subspaces_bruteforce(n, k, p)


def test_enumerate_subspaces_rref_order():
    mats = [m.to_rows() for m in enumerate_subspaces(2, 1, PrimeField(3))]
    assert mats == [[[1, 0]], [[1, 1]], [[1, 2]], [[0, 1]]]


def test_enumerate_subspaces_rejects():
    with pytest.raises(PreconditionError):
        enumerate_subspaces(2, 3, PrimeField(2))


def test_gaussian_binomial_examples():
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(4, 2, 2) == 35
    assert all(gaussian_binomial(n, 0, 7) == 1 for n in range(5))
    with pytest.raises(PreconditionError):
        gaussian_binomial(2, 3, 2)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_subspace_count_equals_gaussian_binomial(p):
    f = PrimeField(p)
    for n in range(5):
        for k in range(n + 1):
            assert sum(1 for _ in enumerate_subspaces(n, k, f)) == gaussian_binomial(n, k, p)


def test_gl_order_bruteforce():
    for p in (2, 3):
        for n in (1, 2):
            count = sum(
                rank(MatrixFp(n, n, tuple(e), PrimeField(p))) == n
                for e in itertools.product(range(p), repeat=n * n)
            )
            assert count == gl_order(n, p)


def test_interpolate_examples():
    assert interpolate([(2, 5), (3, 5)], 1) == IntPoly([5])
    q1 = interpolate([(2, 3), (3, 4), (5, 6)], 1)
    assert q1 == IntPoly([1, 1]) and str(q1) == "q + 1"
    with pytest.raises(InterpolationError):
        interpolate([(2, 3), (3, 5)], 0)


def test_interpolate_preconditions():
    with pytest.raises(PreconditionError):
        interpolate([(2, 3)], 1)
    with pytest.raises(PreconditionError):
        interpolate([(2, 3), (2, 3)], 1)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4))
def test_interpolate_reproduces_points(coeffs):
    poly = IntPoly(coeffs)
    pts = [(x, poly(x)) for x in first_primes(len(coeffs) + 2)]
    got = interpolate(pts, len(coeffs) - 1)
    assert got == poly
    assert all(got(x) == y for x, y in pts)


def test_interpolate_non_integer_coefficients():
    # q/2 fits the points exactly but is not integral
    with pytest.raises(InterpolationError):
        interpolate([(2, 1), (4, 2), (6, 3)], 1)


def test_intpoly_normalises():
    assert IntPoly([1, 0, 0]).coeffs == (1,)
    assert IntPoly([0, 0]).coeffs == ()
    assert IntPoly([]).degree == -1
    assert str(IntPoly([])) == "0"


def test_laurent_arithmetic():
    v = LaurentInt.v()
    one = LaurentInt.const(1)
    assert (v * v.shift(-1)) == v
    assert (v + one - v) == one
    assert LaurentInt({3: 0}) == LaurentInt({})
    assert dict(LaurentInt({1: 2, -1: 0}).items()) == {1: 2}
    assert hash(LaurentInt({1: 2})) == hash(LaurentInt({1: 2}))
    assert (v + one) * (v - one) == v * v - one
