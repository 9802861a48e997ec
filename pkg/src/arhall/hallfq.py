"""Ringel-Hall algebra of a type-A quiver over a prime field.

Functions on iso-classes are stored by their values on orbits.  The product
convention: in ``f * g`` the first factor is evaluated on the quotient and the
second on the subrepresentation, so

    1_A * 1_B = sum_T  #{W <= T stable : W ~ B, T/W ~ A} 1_T.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import FieldMismatchError, PolynomialityError, PreconditionError, ResourceBudgetError
from .exactalg import IntPoly, PrimeField, first_primes, gaussian_binomial, interpolate, reduce_vector, subspace_rows
from .finquiver import IsoClass, QuiverA, _canonical_maps, _decompose_raw, iso_classes

DEFAULT_BUDGET = 2 * 10**5


def _check_budget(total_dims, sub_dims, p: int, budget: int) -> int:
    count = 1
    for d, k in zip(total_dims, sub_dims):
        count *= gaussian_binomial(d, k, p)
    if count > budget:
        raise ResourceBudgetError(f"{count} graded subspaces to enumerate over F_{p}, budget is {budget}")
    return count


@lru_cache(maxsize=None)
def _decompose_cached(quiver: QuiverA, dims: tuple, maps: tuple, p: int) -> IsoClass:
    return _decompose_raw(quiver, dims, [list(map(list, m)) for m in maps], p)


def _freeze(m) -> tuple:
    return tuple(tuple(r) for r in m)


def stable_subspaces(quiver: QuiverA, dims, maps, sub_dims, p: int):
    """Yield graded subspaces (per-vertex RREF bases and pivots) stable under every arrow."""
    n = quiver.n
    arrows = quiver.arrows()
    choices = [list(subspace_rows(dims[v], sub_dims[v], p)) for v in range(n)]
    chosen: list = [None] * n

    def stable(h: int) -> bool:
        s, t = arrows[h]
        piv_t, basis_t = chosen[t]
        phi = maps[h]
        for w in chosen[s][1]:
            img = [sum(phi[r][c] * w[c] for c in range(dims[s])) % p for r in range(dims[t])]
            rem, _ = reduce_vector(img, basis_t, piv_t, p)
            if any(rem):
                return False
        return True

    def dfs(v: int):
        if v == n:
            yield tuple(chosen)
            return
        for c in choices[v]:
            chosen[v] = c
            # arrow v-1 joins vertices v-1 and v, both chosen now
            if v == 0 or stable(v - 1):
                yield from dfs(v + 1)
        chosen[v] = None

    yield from dfs(0)


def sub_and_quotient(quiver: QuiverA, dims, maps, w, p: int):
    """Matrices of the restriction to W and of the induced map on V/W."""
    sub_maps, quot_maps = [], []
    nonpiv = [[c for c in range(dims[v]) if c not in set(w[v][0])] for v in range(quiver.n)]
    for (s, t), phi in zip(quiver.arrows(), maps):
        piv_t, basis_t = w[t]
        piv_s, basis_s = w[s]
        cols = []
        for b in basis_s:
            img = [sum(phi[r][c] * b[c] for c in range(dims[s])) % p for r in range(dims[t])]
            _, coords = reduce_vector(img, basis_t, piv_t, p)
            cols.append(coords)
        sub_maps.append([[cols[j][r] for j in range(len(basis_s))] for r in range(len(basis_t))])
        qcols = []
        for c in nonpiv[s]:
            img = [phi[r][c] for r in range(dims[t])]
            rem, _ = reduce_vector(img, basis_t, piv_t, p)
            qcols.append([rem[c2] for c2 in nonpiv[t]])
        quot_maps.append([[qcols[j][r] for j in range(len(nonpiv[s]))] for r in range(len(nonpiv[t]))])
    return sub_maps, quot_maps


@lru_cache(maxsize=None)
def _census(quiver: QuiverA, total: IsoClass, sub_dims: tuple, p: int) -> Counter:
    """Counter over (quot, sub) of the stable graded subspaces of dimension ``sub_dims``."""
    dims, maps = _canonical_maps(total, quiver)
    quot_dims = tuple(d - k for d, k in zip(dims, sub_dims))
    out: Counter = Counter()
    for w in stable_subspaces(quiver, dims, maps, sub_dims, p):
        sm, qm = sub_and_quotient(quiver, dims, maps, w, p)
        sub = _decompose_cached(quiver, sub_dims, tuple(_freeze(m) for m in sm), p)
        quot = _decompose_cached(quiver, quot_dims, tuple(_freeze(m) for m in qm), p)
        out[quot, sub] += 1
    return out


def _default_quiver(*classes: IsoClass) -> QuiverA:
    n = max((j.hi for c in classes for j in c), default=1)
    return QuiverA.linear(max(n, 1))


def hall_number(total: IsoClass, quot: IsoClass, sub: IsoClass, field: PrimeField,
                quiver: QuiverA | None = None, budget: int = DEFAULT_BUDGET) -> int:
    """Number of stable graded subspaces W of ``total`` with W ~ sub and total/W ~ quot.

    ``quiver`` defaults to the equioriented quiver on just enough vertices.
    """
    if quiver is None:
        quiver = _default_quiver(total, quot, sub)
    n = quiver.n
    for c in (total, quot, sub):
        if not c.fits(quiver):
            raise PreconditionError(f"{c} does not fit on {quiver}")
    td, qd, sd = total.dims(n), quot.dims(n), sub.dims(n)
    if any(t != a + b for t, a, b in zip(td, qd, sd)):
        raise PreconditionError(f"dimension mismatch: {td} != {qd} + {sd}")
    _check_budget(td, sd, field.p, budget)
    return _census(quiver, total, sd, field.p)[quot, sub]


def hall_polynomial(total: IsoClass, quot: IsoClass, sub: IsoClass, quiver: QuiverA | None = None,
                    budget: int = DEFAULT_BUDGET, held_out: int = 2) -> IntPoly:
    """Hall polynomial P with P(q) = hall_number(..., F_q), q prime.

    The degree is at most sum_i k_i (d_i - k_i) for sub dims k and total dims
    d, which is the degree of the product of q-binomials bounding the count.
    Interpolation uses the first D+1 primes; ``held_out`` further primes must
    agree or :class:`PolynomialityError` is raised.
    """
    if quiver is None:
        quiver = _default_quiver(total, quot, sub)
    td, sd = total.dims(quiver.n), sub.dims(quiver.n)
    degree = sum(k * (d - k) for d, k in zip(td, sd))
    primes = first_primes(degree + 1 + held_out)
    points = [(p, hall_number(total, quot, sub, PrimeField(p), quiver, budget)) for p in primes]
    try:
        poly = interpolate(points[: degree + 1], degree)
    except PreconditionError as exc:
        raise PolynomialityError(f"counts {points} are not an integer polynomial: {exc}") from exc
    for p, y in points[degree + 1:]:
        if poly(p) != y:
            raise PolynomialityError(f"interpolated {poly} gives {poly(p)} at q={p}, counted {y}")
    return poly


class HallFn:
    """Finitely supported function on iso-classes of one quiver at one prime."""

    __slots__ = ("quiver", "field", "_coeffs")

    def __init__(self, quiver: QuiverA, field: PrimeField, coeffs: Mapping[IsoClass, object] | Iterable = ()):
        self.quiver = quiver
        self.field = field
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[IsoClass, Fraction] = defaultdict(Fraction)
        for cls, c in items:
            if not isinstance(cls, IsoClass):
                cls = IsoClass(cls)
            if not cls.fits(quiver):
                raise PreconditionError(f"{cls} does not fit on {quiver}")
            acc[cls] += Fraction(c)
        self._coeffs = {k: acc[k] for k in sorted(acc) if acc[k]}

    @classmethod
    def char(cls, label: IsoClass, quiver: QuiverA, field: PrimeField, coeff=1) -> HallFn:
        """Characteristic function of the orbit ``label`` (times ``coeff``)."""
        return cls(quiver, field, {label: coeff})

    @classmethod
    def zero(cls, quiver: QuiverA, field: PrimeField) -> HallFn:
        return cls(quiver, field)

    @classmethod
    def one(cls, quiver: QuiverA, field: PrimeField) -> HallFn:
        return cls(quiver, field, {IsoClass(): 1})

    @property
    def coeffs(self) -> dict[IsoClass, Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, cls: IsoClass) -> Fraction:
        return self._coeffs.get(cls, Fraction(0))

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def support_dims(self) -> set[tuple[int, ...]]:
        return {c.dims(self.quiver.n) for c in self._coeffs}

    def homogeneous(self, dims) -> HallFn:
        dims = tuple(dims)
        return HallFn(self.quiver, self.field, {c: v for c, v in self.items() if c.dims(self.quiver.n) == dims})

    def _check(self, other: HallFn):
        if not isinstance(other, HallFn):
            raise FieldMismatchError(f"expected HallFn, got {type(other).__name__}")
        if self.quiver != other.quiver or self.field != other.field:
            raise FieldMismatchError(
                f"HallFn over {self.quiver}, {self.field} vs {other.quiver}, {other.field}"
            )

    def __add__(self, other: HallFn) -> HallFn:
        self._check(other)
        return HallFn(self.quiver, self.field, list(self.items()) + list(other.items()))

    def __neg__(self) -> HallFn:
        return HallFn(self.quiver, self.field, {c: -v for c, v in self.items()})

    def __sub__(self, other: HallFn) -> HallFn:
        return self + (-other)

    def scale(self, c) -> HallFn:
        c = Fraction(c)
        return HallFn(self.quiver, self.field, {k: c * v for k, v in self.items()})

    def __mul__(self, other):
        if isinstance(other, HallFn):
            return hall_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HallFn)
            and self.quiver == other.quiver
            and self.field == other.field
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.quiver, self.field, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return f"HallFn(0 over {self.quiver}, {self.field})"
        terms = " + ".join(f"{v}*1_{k}" for k, v in self.items())
        return f"HallFn({terms} over {self.quiver}, {self.field})"


def hall_product(f: HallFn, g: HallFn, budget: int = DEFAULT_BUDGET) -> HallFn:
    """Bilinear Hall product; ``f`` sits on the quotient side, ``g`` on the sub side."""
    f._check(g)
    quiver, field = f.quiver, f.field
    n = quiver.n
    acc: dict[IsoClass, Fraction] = defaultdict(Fraction)
    for a, ca in f.items():
        ad = a.dims(n)
        for b, cb in g.items():
            bd = b.dims(n)
            nu = tuple(x + y for x, y in zip(ad, bd))
            for total in iso_classes(quiver, nu):
                count = hall_number(total, a, b, field, quiver, budget)
                if count:
                    acc[total] += ca * cb * count
    return HallFn(quiver, field, acc)


def random_class(quiver: QuiverA, rng: random.Random, max_total: int, max_per_vertex: int | None = None) -> IsoClass:
    """Random interval multiset with total dimension <= ``max_total``."""
    ivs = []
    budget = rng.randint(0, max_total)
    dims = [0] * quiver.n
    for _ in range(4 * quiver.n + 4):
        lo = rng.randint(1, quiver.n)
        hi = rng.randint(lo, quiver.n)
        size = hi - lo + 1
        if size > budget:
            continue
        if max_per_vertex is not None and any(dims[v] >= max_per_vertex for v in range(lo - 1, hi)):
            continue
        ivs.append((lo, hi))
        budget -= size
        for v in range(lo - 1, hi):
            dims[v] += 1
    return IsoClass(ivs)


def random_class_of_size(quiver: QuiverA, rng: random.Random, size: int) -> IsoClass:
    """Random interval multiset with total dimension exactly ``size``."""
    ivs = []
    while size > 0:
        lo = rng.randint(1, quiver.n)
        hi = rng.randint(lo, min(quiver.n, lo + size - 1))
        ivs.append((lo, hi))
        size -= hi - lo + 1
    return IsoClass(ivs)
