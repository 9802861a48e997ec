"""Exact arithmetic over prime fields and the integers.

Matrices are small and dense, so everything here works on tuples of Python
ints.  Python ints never overflow, which covers the arbitrary-precision
requirement for subspace counts at larger primes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import InterpolationError, PreconditionError, SchemaError

MAX_PRIME = 97


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def first_primes(count: int) -> list[int]:
    out: list[int] = []
    n = 2
    while len(out) < count:
        if is_prime(n):
            out.append(n)
        n += 1
    return out


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a small prime ``p``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise SchemaError(f"field size must be an integer, got {self.p!r}")
        if not is_prime(self.p):
            raise PreconditionError(f"field size {self.p} is not prime")
        if self.p > MAX_PRIME:
            raise PreconditionError(f"prime {self.p} exceeds the supported maximum {MAX_PRIME}")

    def __repr__(self) -> str:
        return f"F_{self.p}"

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def elements(self) -> range:
        return range(self.p)


@dataclass(frozen=True)
class MatrixFp:
    """Dense matrix over F_p, entries stored row-major and reduced mod p."""

    rows: int
    cols: int
    entries: tuple[int, ...]
    field: PrimeField

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise SchemaError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise SchemaError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )
        p = self.field.p
        if any(not 0 <= e < p for e in self.entries):
            object.__setattr__(self, "entries", tuple(e % p for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], field: PrimeField, cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise SchemaError("ragged matrix rows")
        return cls(len(rows), cols, tuple(e % field.p for r in rows for e in r), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: PrimeField):
        return cls(rows, cols, (0,) * (rows * cols), field)

    @classmethod
    def identity(cls, n: int, field: PrimeField):
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)), field)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: MatrixFp) -> MatrixFp:
        if self.field != other.field:
            raise PreconditionError("matrices over different fields")
        if self.cols != other.rows:
            raise PreconditionError(f"shape mismatch {self.shape} @ {other.shape}")
        return MatrixFp.from_rows(
            matmul(self.to_rows(), other.to_rows(), self.field.p, other.cols),
            self.field,
            other.cols,
        )

    def transpose(self) -> MatrixFp:
        return MatrixFp.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.field, self.rows
        )

    def __repr__(self) -> str:
        return f"MatrixFp({self.to_rows()}, p={self.field.p})"


# -- list-level kernels -------------------------------------------------------


def matmul(a: list[list[int]], b: list[list[int]], p: int, bcols: int) -> list[list[int]]:
    out = []
    for row in a:
        acc = [0] * bcols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(b[k]):
                    if y:
                        acc[j] += x * y
        out.append([v % p for v in acc])
    return out


def rref(rows: Iterable[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form mod p; returns the nonzero rows and pivot columns."""
    m = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        if inv != 1:
            m[r] = [(x * inv) % p for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_rows(rows: Iterable[Sequence[int]], ncols: int, p: int) -> int:
    return len(rref(rows, ncols, p)[1])


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {x : A x = 0} over F_p."""
    red, pivots = rref(rows, ncols, p)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for row, pc in zip(red, pivots):
            v[pc] = (-row[free]) % p
        basis.append(v)
    return basis


def reduce_vector(v: Sequence[int], basis: Sequence[Sequence[int]], pivots: Sequence[int], p: int):
    """Reduce ``v`` modulo the span of an RREF basis.

    Returns ``(remainder, coordinates)``; ``v`` lies in the span iff the
    remainder is zero, in which case ``v = sum(coordinates[i] * basis[i])``.
    """
    v = list(v)
    coords = []
    for row, c in zip(basis, pivots):
        f = v[c]
        coords.append(f)
        if f:
            v = [(x - f * y) % p for x, y in zip(v, row)]
    return v, coords


def is_invertible_rows(rows: Sequence[Sequence[int]], n: int, p: int) -> bool:
    return len(rows) == n and rank_rows(rows, n, p) == n


# -- public operations ---------------------------------------------------------


def rank(m: MatrixFp) -> int:
    """Rank of ``m`` over its prime field."""
    return rank_rows(m.to_rows(), m.cols, m.field.p)


def enumerate_subspaces(ambient_dim: int, sub_dim: int, field: PrimeField) -> Iterator[MatrixFp]:
    """Yield every ``sub_dim``-dimensional subspace of F_p^ambient_dim once.

    Each subspace comes as its unique RREF basis (``sub_dim x ambient_dim``).
    Order: pivot column sets lexicographically, then free entries
    lexicographically in row-major position order.
    """
    _check_dims(ambient_dim, sub_dim)
    return (
        MatrixFp.from_rows(m, field, ambient_dim)
        for _, m in _subspace_rows(ambient_dim, sub_dim, field.p)
    )


def _check_dims(n: int, k: int):
    if n < 0 or k < 0:
        raise PreconditionError("dimensions must be non-negative")
    if k > n:
        raise PreconditionError(f"subspace dimension {k} exceeds ambient dimension {n}")


def _subspace_rows(n: int, k: int, p: int) -> Iterator[tuple[tuple[int, ...], list[list[int]]]]:
    for pivots in itertools.combinations(range(n), k):
        pivset = set(pivots)
        # free slots: row r may be nonzero only right of its pivot, outside other pivot columns
        slots = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivset]
        for values in itertools.product(range(p), repeat=len(slots)):
            m = [[0] * n for _ in range(k)]
            for r, pc in enumerate(pivots):
                m[r][pc] = 1
            for (r, c), x in zip(slots, values):
                m[r][c] = x
            yield pivots, m


def subspace_rows(n: int, k: int, p: int) -> Iterator[tuple[tuple[int, ...], list[list[int]]]]:
    """List-level variant of :func:`enumerate_subspaces` that also yields pivots."""
    _check_dims(n, k)
    return _subspace_rows(n, k, p)


@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int, q: int) -> int:
    """The q-binomial coefficient [n choose k]_q."""
    _check_dims(n, k)
    if q < 2:
        raise PreconditionError("q must be at least 2")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def gl_order(n: int, q: int) -> int:
    """|GL_n(F_q)|."""
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients in ascending degree."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mono = "" if d == 0 else ("q" if d == 1 else f"q^{d}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        head_sign, head = parts[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s


def interpolate(points: Sequence[tuple[int, int]], degree_bound: int) -> IntPoly:
    """Integer polynomial of degree <= ``degree_bound`` through ``points``.

    The first ``degree_bound + 1`` points determine the candidate; any further
    points must lie on it.  Raises :class:`InterpolationError` when the
    candidate has non-integer coefficients or misses a surplus point.
    """
    points = [(int(x), int(y)) for x, y in points]
    if degree_bound < 0:
        raise PreconditionError("degree bound must be non-negative")
    if len(points) < degree_bound + 1:
        raise PreconditionError(
            f"need at least {degree_bound + 1} points for degree bound {degree_bound}"
        )
    if len({x for x, _ in points}) != len(points):
        raise PreconditionError("abscissae must be distinct")

    fit = points[: degree_bound + 1]
    coeffs = [Fraction(0)] * (degree_bound + 1)
    for i, (xi, yi) in enumerate(fit):
        # Lagrange basis polynomial, built by repeated multiplication by (x - xj)
        basis = [Fraction(1)]
        denom = 1
        for j, (xj, _) in enumerate(fit):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, b in enumerate(basis):
            coeffs[k] += yi * b / denom
    if any(c.denominator != 1 for c in coeffs):
        raise InterpolationError(f"non-integer coefficients {[str(c) for c in coeffs]}")
    poly = IntPoly(tuple(int(c) for c in coeffs))
    for x, y in points[degree_bound + 1:]:
        if poly(x) != y:
            raise InterpolationError(f"point ({x}, {y}) is off the fitted polynomial {poly}")
    return poly


class LaurentInt:
    """Element of Z[v, v^-1] as a sparse exponent -> coefficient map."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))

    @classmethod
    def const(cls, c: int) -> LaurentInt:
        return cls({0: c})

    @classmethod
    def v(cls, k: int = 1) -> LaurentInt:
        return cls({k: 1})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentInt.const(other)
        return isinstance(other, LaurentInt) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __add__(self, other: LaurentInt | int) -> LaurentInt:
        if isinstance(other, int):
            other = LaurentInt.const(other)
        if not isinstance(other, LaurentInt):
            return NotImplemented
        return LaurentInt(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> LaurentInt:
        return LaurentInt((e, -c) for e, c in self._terms)

    def __sub__(self, other: LaurentInt | int) -> LaurentInt:
        if isinstance(other, int):
            other = LaurentInt.const(other)
        return self + (-other)

    def __mul__(self, other: LaurentInt | int) -> LaurentInt:
        if isinstance(other, int):
            return LaurentInt((e, c * other) for e, c in self._terms)
        if not isinstance(other, LaurentInt):
            return NotImplemented
        return LaurentInt(
            (e1 + e2, c1 * c2) for e1, c1 in self._terms for e2, c2 in other._terms
        )

    __rmul__ = __mul__

    def shift(self, k: int) -> LaurentInt:
        """Multiply by v^k."""
        return LaurentInt((e + k, c) for e, c in self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            mono = "" if e == 0 else ("v" if e == 1 else f"v^{e}")
            parts.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(parts)
