"""Finite type-A quivers, their representations and interval-module classes.

Vertices are numbered 1..n.  Arrow ``h`` (0-based) joins vertices ``h+1`` and
``h+2`` and points forward (``i -> i+1``) or backward (``i <- i+1``).  Matrices
act on column vectors, so the map of an arrow ``s -> t`` has shape
``dims[t] x dims[s]``.
"""

from __future__ import annotations

import enum
import graphlib
import itertools
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import PreconditionError, ResourceBudgetError, SchemaError
from .exactalg import (
    MatrixFp,
    PrimeField,
    gl_order,
    is_invertible_rows,
    matmul,
    nullspace,
    rank_rows,
    rref,
)

DEFAULT_AUT_BUDGET = 10**6


class Direction(enum.Enum):
    FORWARD = "fwd"
    BACKWARD = "bwd"


@dataclass(frozen=True)
class QuiverA:
    n: int
    directions: tuple[Direction, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise SchemaError("a type-A quiver needs at least one vertex")
        dirs = tuple(Direction(d) if not isinstance(d, Direction) else d for d in self.directions)
        if len(dirs) != self.n - 1:
            raise SchemaError(f"A_{self.n} needs {self.n - 1} arrow directions, got {len(dirs)}")
        object.__setattr__(self, "directions", dirs)

    @classmethod
    def linear(cls, n: int) -> QuiverA:
        return cls(n, (Direction.FORWARD,) * (n - 1))

    def arrows(self) -> list[tuple[int, int]]:
        """(source, target) pairs, 0-based vertex indices, one per arrow."""
        out = []
        for h, d in enumerate(self.directions):
            out.append((h, h + 1) if d is Direction.FORWARD else (h + 1, h))
        return out

    def intervals(self) -> list[DiscreteInterval]:
        return [DiscreteInterval(lo, hi) for lo in range(1, self.n + 1) for hi in range(self.n, lo - 1, -1)]

    def __str__(self) -> str:
        s = "1"
        for i, d in enumerate(self.directions, start=2):
            s += ("->" if d is Direction.FORWARD else "<-") + str(i)
        return s


@dataclass(frozen=True, order=True)
class DiscreteInterval:
    lo: int
    hi: int

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise SchemaError(f"invalid interval [{self.lo}..{self.hi}]")

    def __contains__(self, vertex: int) -> bool:
        return self.lo <= vertex <= self.hi

    def __repr__(self) -> str:
        return f"[{self.lo}..{self.hi}]"


def _interval_key(j: DiscreteInterval) -> tuple[int, int]:
    return (j.lo, j.hi)


class IsoClass:
    """Isomorphism class of a type-A representation: a multiset of intervals."""

    __slots__ = ("intervals", "_hash")

    def __init__(self, intervals=()):
        ivs = []
        for j in intervals:
            if not isinstance(j, DiscreteInterval):
                j = DiscreteInterval(*j)
            ivs.append(j)
        self.intervals: tuple[DiscreteInterval, ...] = tuple(sorted(ivs, key=_interval_key))
        self._hash = hash(self.intervals)

    @classmethod
    def from_counts(cls, counts: dict[DiscreteInterval, int]) -> IsoClass:
        return cls([j for j, m in counts.items() for _ in range(m)])

    def counts(self) -> Counter:
        return Counter(self.intervals)

    def dims(self, n: int | None = None) -> tuple[int, ...]:
        if n is None:
            n = max((j.hi for j in self.intervals), default=0)
        d = [0] * n
        for j in self.intervals:
            if j.hi > n:
                raise PreconditionError(f"{j} does not fit on {n} vertices")
            for v in range(j.lo - 1, j.hi):
                d[v] += 1
        return tuple(d)

    def fits(self, quiver: QuiverA) -> bool:
        return all(j.hi <= quiver.n for j in self.intervals)

    def __add__(self, other: IsoClass) -> IsoClass:
        return IsoClass(self.intervals + other.intervals)

    def __eq__(self, other) -> bool:
        return isinstance(other, IsoClass) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: IsoClass) -> bool:
        return [_interval_key(j) for j in self.intervals] < [_interval_key(j) for j in other.intervals]

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __repr__(self) -> str:
        if not self.intervals:
            return "{}"
        return "{" + ", ".join(map(repr, self.intervals)) + "}"


@dataclass(frozen=True)
class RepPoint:
    """A point of the representation space: one matrix per arrow."""

    quiver: QuiverA
    dims: tuple[int, ...]
    maps: tuple[MatrixFp, ...]
    field: PrimeField

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.dims) != self.quiver.n:
            raise SchemaError(f"dimension vector has length {len(self.dims)}, quiver has {self.quiver.n} vertices")
        if any(d < 0 for d in self.dims):
            raise SchemaError("dimensions must be non-negative")
        if len(self.maps) != self.quiver.n - 1:
            raise SchemaError(f"expected {self.quiver.n - 1} arrow maps, got {len(self.maps)}")
        for h, ((s, t), m) in enumerate(zip(self.quiver.arrows(), self.maps)):
            if m.field != self.field:
                raise SchemaError(f"map of arrow {h + 1} is over {m.field}, point is over {self.field}")
            if m.shape != (self.dims[t], self.dims[s]):
                raise SchemaError(
                    f"map of arrow {h + 1} has shape {m.shape}, expected {(self.dims[t], self.dims[s])}"
                )

    def raw_maps(self) -> list[list[list[int]]]:
        return [m.to_rows() for m in self.maps]

    def conjugate(self, g: Sequence[MatrixFp]) -> RepPoint:
        """The point g.phi = g phi g^-1 for g in the product of GL(dims)."""
        p = self.field.p
        ginv = [_inverse(m.to_rows(), m.rows, p) for m in g]
        maps = []
        for (s, t), m in zip(self.quiver.arrows(), self.maps):
            rows = matmul(matmul(g[t].to_rows(), m.to_rows(), p, m.cols), ginv[s], p, self.dims[s])
            maps.append(MatrixFp.from_rows(rows, self.field, self.dims[s]))
        return RepPoint(self.quiver, self.dims, tuple(maps), self.field)


def _inverse(a: list[list[int]], n: int, p: int) -> list[list[int]]:
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n, p)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise PreconditionError("matrix is not invertible")
    return [row[n:] for row in red]


# -- Hom spaces ----------------------------------------------------------------


def _hom_equations(quiver, dims_m, maps_m, dims_n, maps_n, p):
    """Linear system whose kernel is Hom(M, N).

    Unknowns are the entries of X_i (dims_n[i] x dims_m[i]) for every vertex,
    concatenated row-major.  Each arrow s -> t contributes
    X_t phi^M - phi^N X_s = 0.
    """
    offsets = [0]
    for a, b in zip(dims_m, dims_n):
        offsets.append(offsets[-1] + a * b)
    nvars = offsets[-1]
    rows = []
    for (s, t), fm, fn in zip(quiver.arrows(), maps_m, maps_n):
        for r in range(dims_n[t]):
            for c in range(dims_m[s]):
                eq = [0] * nvars
                # (X_t fm)[r][c] = sum_k X_t[r][k] fm[k][c]
                for k in range(dims_m[t]):
                    x = fm[k][c]
                    if x:
                        eq[offsets[t] + r * dims_m[t] + k] += x
                # (fn X_s)[r][c] = sum_k fn[r][k] X_s[k][c]
                for k in range(dims_n[s]):
                    x = fn[r][k]
                    if x:
                        eq[offsets[s] + k * dims_m[s] + c] -= x
                if any(eq):
                    rows.append([e % p for e in eq])
    return rows, nvars, offsets


def hom_space_dim(m: RepPoint, n: RepPoint) -> int:
    """dim Hom(M, N) over the common field."""
    if m.quiver != n.quiver or m.field != n.field:
        raise PreconditionError("representations over different quivers or fields")
    p = m.field.p
    rows, nvars, _ = _hom_equations(m.quiver, m.dims, m.raw_maps(), n.dims, n.raw_maps(), p)
    return nvars - rank_rows(rows, nvars, p)


def _interval_raw(quiver: QuiverA, j: DiscreteInterval):
    dims = [1 if v + 1 in j else 0 for v in range(quiver.n)]
    maps = [[[1]] if dims[s] and dims[t] else [[] for _ in range(dims[t])] for s, t in quiver.arrows()]
    return dims, maps


def _hom_from_interval(quiver: QuiverA, j: DiscreteInterval, dims, maps, p: int) -> int:
    jd, jm = _interval_raw(quiver, j)
    rows, nvars, _ = _hom_equations(quiver, jd, jm, dims, maps, p)
    return nvars - rank_rows(rows, nvars, p)


def hom_dim(src: DiscreteInterval, dst: DiscreteInterval, quiver: QuiverA, field: PrimeField | int = 2) -> int:
    """dim Hom(T_src, T_dst) between interval modules."""
    p = field.p if isinstance(field, PrimeField) else PrimeField(field).p
    for j in (src, dst):
        if j.hi > quiver.n:
            raise PreconditionError(f"{j} does not fit on {quiver}")
    dd, dm = _interval_raw(quiver, dst)
    return _hom_from_interval(quiver, src, dd, dm, p)


@lru_cache(maxsize=None)
def hom_matrix(quiver: QuiverA, p: int = 2) -> tuple[tuple[DiscreteInterval, ...], tuple[tuple[int, ...], ...]]:
    """Intervals in a Hom-directed order and the Hom-dimension matrix in that order.

    The matrix H[a][b] = dim Hom(T_a, T_b) is upper unitriangular in the
    returned order: a topological order of the relation "Hom(T_a, T_b) != 0".
    """
    ivs = quiver.intervals()
    h = {(a, b): hom_dim(a, b, quiver, p) for a in ivs for b in ivs}
    ts = graphlib.TopologicalSorter({b: [a for a in ivs if a != b and h[a, b]] for b in ivs})
    order = tuple(ts.static_order())
    return order, tuple(tuple(h[a, b] for b in order) for a in order)


def _decompose_raw(quiver: QuiverA, dims, maps, p: int) -> IsoClass:
    order, hm = hom_matrix(quiver, p)
    k = len(order)
    h = [_hom_from_interval(quiver, j, dims, maps, p) for j in order]
    mult = [0] * k
    for a in range(k - 1, -1, -1):
        mult[a] = h[a] - sum(hm[a][b] * mult[b] for b in range(a + 1, k))
    if any(m < 0 for m in mult):
        raise AssertionError(f"negative multiplicity while decomposing: {mult}")
    return IsoClass.from_counts({order[a]: mult[a] for a in range(k) if mult[a]})


def decompose(point: RepPoint) -> IsoClass:
    """Interval decomposition of a representation, up to isomorphism.

    Multiplicities come from dim Hom(T_J, point) for every interval J, solved
    against the unitriangular Hom matrix between interval modules.
    """
    return _decompose_raw(point.quiver, point.dims, point.raw_maps(), point.field.p)


# -- iso-class enumeration and representatives -----------------------------------


def iso_classes(quiver: QuiverA, dims: Sequence[int]) -> list[IsoClass]:
    """All interval multisets with dimension vector ``dims``, sorted canonically."""
    dims = tuple(dims)
    if len(dims) != quiver.n:
        raise SchemaError(f"dimension vector has length {len(dims)}, quiver has {quiver.n} vertices")
    if any(d < 0 for d in dims):
        raise SchemaError("dimensions must be non-negative")
    return sorted(IsoClass(c) for c in _interval_multisets(dims, 0))


@lru_cache(maxsize=None)
def _interval_multisets(dims: tuple[int, ...], start: int) -> tuple[tuple[DiscreteInterval, ...], ...]:
    # peel intervals starting at the first nonzero vertex
    while start < len(dims) and dims[start] == 0:
        start += 1
    if start == len(dims):
        return ((),)
    out = []
    for hi in range(start, len(dims)):
        if dims[hi] == 0:
            break
        rest = list(dims)
        for v in range(start, hi + 1):
            rest[v] -= 1
        for tail in _interval_multisets(tuple(rest), start):
            j = DiscreteInterval(start + 1, hi + 1)
            # keep tails non-increasing in key order to count each multiset once
            if tail and tail[0].lo == j.lo and tail[0].hi > j.hi:
                continue
            out.append((j,) + tail)
    return tuple(out)


def _default_quiver(cls: IsoClass) -> QuiverA:
    return QuiverA.linear(max(1, max((j.hi for j in cls.intervals), default=1)))


def canonical_point(cls: IsoClass, field: PrimeField, quiver: QuiverA | None = None) -> RepPoint:
    """A 0/1 block-structured point in the orbit labelled by ``cls``."""
    if quiver is None:
        quiver = _default_quiver(cls)
    if not cls.fits(quiver):
        raise PreconditionError(f"{cls} does not fit on {quiver}")
    dims, maps = _canonical_maps(cls, quiver)
    return RepPoint(
        quiver,
        tuple(dims),
        tuple(MatrixFp.from_rows(m, field, dims[s]) for (s, _), m in zip(quiver.arrows(), maps)),
        field,
    )


def _canonical_maps(cls: IsoClass, quiver: QuiverA):
    n = quiver.n
    dims = [0] * n
    slot: dict[tuple[int, int], int] = {}
    for idx, j in enumerate(cls.intervals):
        for v in range(j.lo - 1, j.hi):
            slot[idx, v] = dims[v]
            dims[v] += 1
    maps = []
    for s, t in quiver.arrows():
        m = [[0] * dims[s] for _ in range(dims[t])]
        for idx, j in enumerate(cls.intervals):
            if (idx, s) in slot and (idx, t) in slot:
                m[slot[idx, t]][slot[idx, s]] = 1
        maps.append(m)
    return dims, maps


# -- orbits ----------------------------------------------------------------------


def group_order(dims: Sequence[int], p: int) -> int:
    out = 1
    for d in dims:
        out *= gl_order(d, p)
    return out


def automorphism_count(cls: IsoClass, field: PrimeField, quiver: QuiverA | None = None) -> int:
    """|Aut(V)| from the structure of End(V).

    Interval modules have End = F_q, so End(V) modulo its radical is the
    product of the matrix algebras M_m(F_q) over the multiplicities m, and
    an endomorphism is invertible iff its image there is:
    |Aut| = q^(dim End - sum m^2) * prod |GL_m(q)|.
    """
    if quiver is None:
        quiver = _default_quiver(cls)
    p = field.p
    counts = cls.counts()
    dim_end = sum(
        ma * mb * hom_dim(a, b, quiver, p) for a, ma in counts.items() for b, mb in counts.items()
    )
    out = p ** (dim_end - sum(m * m for m in counts.values()))
    for m in counts.values():
        out *= gl_order(m, p)
    return out


def automorphism_count_enumerated(cls: IsoClass, field: PrimeField, quiver: QuiverA | None = None,
                                  budget: int = DEFAULT_AUT_BUDGET) -> int:
    """|Aut(V)| by enumerating the endomorphism space and testing invertibility."""
    if quiver is None:
        quiver = _default_quiver(cls)
    p = field.p
    dims, maps = _canonical_maps(cls, quiver)
    rows, nvars, offsets = _hom_equations(quiver, dims, maps, dims, maps, p)
    basis = nullspace(rows, nvars, p)
    size = p ** len(basis)
    if size > budget:
        raise ResourceBudgetError(
            f"endomorphism space of {cls} has {size} elements over F_{p}, budget is {budget}"
        )
    count = 0
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        x = [0] * nvars
        for c, b in zip(coeffs, basis):
            if c:
                x = [(xi + c * bi) % p for xi, bi in zip(x, b)]
        ok = True
        for v, d in enumerate(dims):
            block = x[offsets[v]:offsets[v + 1]]
            if not is_invertible_rows([block[r * d:(r + 1) * d] for r in range(d)], d, p):
                ok = False
                break
        if ok:
            count += 1
    return count


def orbit_size(cls: IsoClass, field: PrimeField, quiver: QuiverA | None = None,
               exhaustive: bool = False, budget: int = DEFAULT_AUT_BUDGET) -> int:
    """|G_V| / |Aut(V)| for the orbit labelled by ``cls``.

    With ``exhaustive=True`` the automorphisms are counted by enumerating
    End(V), subject to ``budget``.
    """
    if quiver is None:
        quiver = _default_quiver(cls)
    if not cls.fits(quiver):
        raise PreconditionError(f"{cls} does not fit on {quiver}")
    if exhaustive:
        aut = automorphism_count_enumerated(cls, field, quiver, budget)
    else:
        aut = automorphism_count(cls, field, quiver)
    g = group_order(cls.dims(quiver.n), field.p)
    if g % aut:
        raise AssertionError(f"|Aut| = {aut} does not divide |G| = {g}")
    return g // aut


def variety_size(quiver: QuiverA, dims: Sequence[int], p: int) -> int:
    """|E_V| = p^(sum over arrows of dims[s] * dims[t])."""
    return p ** sum(dims[s] * dims[t] for s, t in quiver.arrows())


def iter_points(quiver: QuiverA, dims: Sequence[int], field: PrimeField) -> Iterator[RepPoint]:
    """Every point of the representation space (exponential; tests only)."""
    shapes = [(dims[t], dims[s]) for s, t in quiver.arrows()]
    sizes = [r * c for r, c in shapes]
    for flat in itertools.product(range(field.p), repeat=sum(sizes)):
        maps, pos = [], 0
        for (r, c), sz in zip(shapes, sizes):
            maps.append(MatrixFp(r, c, tuple(flat[pos:pos + sz]), field))
            pos += sz
        yield RepPoint(quiver, tuple(dims), tuple(maps), field)


def random_invertible(n: int, field: PrimeField, rng: random.Random) -> MatrixFp:
    while True:
        rows = [[rng.randrange(field.p) for _ in range(n)] for _ in range(n)]
        if is_invertible_rows(rows, n, field.p):
            return MatrixFp.from_rows(rows, field, n)


def random_conjugate(point: RepPoint, rng: random.Random) -> RepPoint:
    g = [random_invertible(d, point.field, rng) for d in point.dims]
    return point.conjugate(g)
