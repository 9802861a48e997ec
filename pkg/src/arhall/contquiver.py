"""Continuous type-A quivers, partitions of the line, and refinement transfer.

All endpoints are exact rationals (``fractions.Fraction``) or ``math.inf`` /
``-math.inf``.  Continuous-side objects are handled at the level of
iso-classes only: a finitely generated representation is a multiset of real
intervals, and a partition turns the adapted ones into interval multisets of
a finite type-A quiver.
"""

from __future__ import annotations

import bisect
import enum
import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    AdaptednessError,
    FieldMismatchError,
    PreconditionError,
    RefinementConflictError,
    SchemaError,
)
from .finquiver import DiscreteInterval, Direction, IsoClass, QuiverA
from .hallfq import HallFn


def to_rational(x) -> Fraction | float:
    """Parse an endpoint: int, Fraction, ``"p/q"`` string, or ``"-inf"``/``"inf"``."""
    if isinstance(x, bool):
        raise SchemaError(f"not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return x
        raise SchemaError(f"floating point endpoint {x!r}; write rationals as 'p/q' strings")
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf"):
            return math.inf
        if s == "-inf":
            return -math.inf
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {x!r}") from exc
    raise SchemaError(f"not a rational: {x!r}")


def format_rational(x) -> int | str:
    if isinstance(x, float):
        return "inf" if x > 0 else "-inf"
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Order(enum.Enum):
    LT = "lt"
    GT = "gt"


class Own(enum.Enum):
    """Which side a cut point belongs to."""

    LEFT = "left"    # ..., a]  (a, ...
    RIGHT = "right"  # ..., a)  [a, ...


@dataclass(frozen=True)
class ContinuousQuiverA:
    """The real line with finitely many turning points ``S``.

    ``piece_orders[j]`` is the order on the j-th piece (-inf, S_1], [S_1, S_2],
    ..., [S_k, +inf).
    """

    S: tuple = ()
    piece_orders: tuple = (Order.LT,)

    def __post_init__(self):
        S = tuple(to_rational(s) for s in self.S)
        if any(isinstance(s, float) for s in S):
            raise SchemaError("turning points must be finite")
        if any(a >= b for a, b in zip(S, S[1:])):
            raise SchemaError("turning points must be strictly increasing")
        orders = tuple(Order(o) if not isinstance(o, Order) else o for o in self.piece_orders)
        if len(orders) != len(S) + 1:
            raise SchemaError(f"{len(S)} turning points need {len(S) + 1} piece orders, got {len(orders)}")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "piece_orders", orders)
        for j, (a, b) in enumerate(zip(orders, orders[1:])):
            if a is b:
                warnings.warn(
                    f"pieces on both sides of {S[j]} have the same order; it is not a sink or source",
                    stacklevel=2,
                )

    @classmethod
    def line(cls) -> ContinuousQuiverA:
        return cls((), (Order.LT,))

    def order_right_of(self, a) -> Order:
        return self.piece_orders[bisect.bisect_right(self.S, a)]

    def order_left_of(self, a) -> Order:
        return self.piece_orders[bisect.bisect_left(self.S, a)]


@dataclass(frozen=True)
class RealInterval:
    lo: Fraction | float
    lo_closed: bool
    hi: Fraction | float
    hi_closed: bool

    def __post_init__(self):
        lo, hi = to_rational(self.lo), to_rational(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == math.inf or hi == -math.inf:
            raise SchemaError("interval ends on the wrong infinity")
        if (lo == -math.inf and self.lo_closed) or (hi == math.inf and self.hi_closed):
            raise SchemaError("infinite ends must be open")
        if lo > hi or (lo == hi and not (self.lo_closed and self.hi_closed)):
            raise SchemaError(f"empty interval {self!r}")

    @classmethod
    def parse(cls, text: str) -> RealInterval:
        """Parse ``"(0,1]"``, ``"[-inf,2)"`` style strings (convenience for tests)."""
        t = text.strip()
        lo_s, hi_s = t[1:-1].split(",")
        return cls(to_rational(lo_s), t[0] == "[", to_rational(hi_s), t[-1] == "]")

    def sort_key(self):
        return (self.lo, not self.lo_closed, self.hi, self.hi_closed)

    def __lt__(self, other: RealInterval) -> bool:
        return self.sort_key() < other.sort_key()

    def __contains__(self, x) -> bool:
        if x < self.lo or (x == self.lo and not self.lo_closed):
            return False
        if x > self.hi or (x == self.hi and not self.hi_closed):
            return False
        return True

    def contains_interval(self, other: RealInterval) -> bool:
        if other.lo < self.lo or (other.lo == self.lo and other.lo_closed and not self.lo_closed):
            return False
        if other.hi > self.hi or (other.hi == self.hi and other.hi_closed and not self.hi_closed):
            return False
        return True

    def __repr__(self) -> str:
        lo, hi = format_rational(self.lo), format_rational(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo},{hi}{']' if self.hi_closed else ')'}"


class FGRep:
    """Iso-class of a finitely generated representation: a multiset of real intervals."""

    __slots__ = ("intervals", "_hash")

    def __init__(self, intervals: Iterable[RealInterval | str] = ()):
        ivs = [RealInterval.parse(j) if isinstance(j, str) else j for j in intervals]
        self.intervals: tuple[RealInterval, ...] = tuple(sorted(ivs, key=RealInterval.sort_key))
        self._hash = hash(self.intervals)

    def dim_at(self, x) -> int:
        return sum(x in j for j in self.intervals)

    def endpoints(self) -> set:
        return {e for j in self.intervals for e in (j.lo, j.hi) if not isinstance(e, float)}

    def __add__(self, other: FGRep) -> FGRep:
        return FGRep(self.intervals + other.intervals)

    def __eq__(self, other) -> bool:
        return isinstance(other, FGRep) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: FGRep) -> bool:
        return [j.sort_key() for j in self.intervals] < [j.sort_key() for j in other.intervals]

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __repr__(self) -> str:
        if not self.intervals:
            return "{}"
        return "{" + ", ".join(map(repr, self.intervals)) + "}"


@dataclass(frozen=True)
class Partition:
    """Consecutive intervals I_1, ..., I_n covering the line.

    ``ownership[i]`` says whether cut ``cuts[i]`` closes the interval on its
    left or the one on its right.  Equal consecutive cuts are allowed when the
    flags make the middle interval the singleton [a, a].
    """

    cuts: tuple = ()
    ownership: tuple = ()

    def __post_init__(self):
        cuts = tuple(to_rational(c) for c in self.cuts)
        if any(isinstance(c, float) for c in cuts):
            raise SchemaError("cuts must be finite")
        own = tuple(Own(o) if not isinstance(o, Own) else o for o in self.ownership)
        if len(own) != len(cuts):
            raise SchemaError(f"{len(cuts)} cuts need {len(cuts)} ownership flags, got {len(own)}")
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "ownership", own)
        for i in range(len(cuts) - 1):
            a, b = cuts[i], cuts[i + 1]
            if a > b:
                raise SchemaError("cuts must be non-decreasing")
            if a == b and not (own[i] is Own.RIGHT and own[i + 1] is Own.LEFT):
                raise SchemaError(f"repeated cut {format_rational(a)} leaves an empty interval")

    @classmethod
    def uniform(cls, cuts: Sequence, own: Own | str = Own.LEFT) -> Partition:
        return cls(tuple(cuts), (Own(own),) * len(cuts))

    @property
    def n(self) -> int:
        return len(self.cuts) + 1

    def blocks(self) -> list[RealInterval]:
        out = []
        lo, lo_closed = -math.inf, False
        for c, o in zip(self.cuts, self.ownership):
            out.append(RealInterval(lo, lo_closed, c, o is Own.LEFT))
            lo, lo_closed = c, o is Own.RIGHT
        out.append(RealInterval(lo, lo_closed, math.inf, False))
        return out

    def cut_pairs(self) -> set[tuple[Fraction, Own]]:
        return set(zip(self.cuts, self.ownership))

    def __repr__(self) -> str:
        return " ".join(map(repr, self.blocks()))


def partition_from_pairs(pairs: Iterable[tuple[Fraction, Own]]) -> Partition:
    """Partition with the given (cut, flag) set; a cut carrying both flags makes a singleton."""
    ordered = sorted(set(pairs), key=lambda cp: (cp[0], cp[1] is Own.LEFT))
    return Partition(tuple(c for c, _ in ordered), tuple(o for _, o in ordered))


class QuiverOfPartition(NamedTuple):
    quiver: QuiverA
    basepoints: tuple


def build_quiver(ar: ContinuousQuiverA, part: Partition) -> QuiverOfPartition:
    """Finite quiver whose vertices are the intervals of ``part``, plus basepoints.

    At a cut owned on the left the order is read just right of the cut, at a
    cut owned on the right just left of it; ``<`` gives an arrow i -> i+1.
    """
    dirs = []
    for c, o in zip(part.cuts, part.ownership):
        order = ar.order_right_of(c) if o is Own.LEFT else ar.order_left_of(c)
        dirs.append(Direction.FORWARD if order is Order.LT else Direction.BACKWARD)
    cuts = part.cuts
    n = part.n
    if n == 1:
        base = (Fraction(0),)
    else:
        base = tuple(
            [cuts[0] - 1] + [(cuts[i - 1] + cuts[i]) / 2 for i in range(1, n - 1)] + [cuts[-1] + 1]
        )
    return QuiverOfPartition(QuiverA(n, tuple(dirs)), base)


def is_refinement(coarse: Partition, fine: Partition) -> bool:
    """True iff every interval of ``fine`` lies inside an interval of ``coarse``."""
    cb = coarse.blocks()
    return all(any(c.contains_interval(f) for c in cb) for f in fine.blocks())


def common_refinement(p1: Partition, p2: Partition) -> Partition:
    """Coarsest common refinement; shared cut values must carry the same flags."""
    flags1: dict = {}
    flags2: dict = {}
    for c, o in zip(p1.cuts, p1.ownership):
        flags1.setdefault(c, set()).add(o)
    for c, o in zip(p2.cuts, p2.ownership):
        flags2.setdefault(c, set()).add(o)
    for c in flags1.keys() & flags2.keys():
        if flags1[c] != flags2[c]:
            raise RefinementConflictError(
                f"cut {format_rational(c)} owned {sorted(o.value for o in flags1[c])} in one partition "
                f"and {sorted(o.value for o in flags2[c])} in the other"
            )
    return partition_from_pairs(p1.cut_pairs() | p2.cut_pairs())


def _block_span(j: RealInterval, part: Partition) -> tuple[int, int] | None:
    """0-based (first, last) block indices when ``j`` is a union of blocks."""
    cuts, own = part.cuts, part.ownership
    if j.lo == -math.inf:
        first = 0
    else:
        want = Own.RIGHT if j.lo_closed else Own.LEFT
        k = next((k for k in range(len(cuts)) if cuts[k] == j.lo and own[k] is want), None)
        if k is None:
            return None
        first = k + 1
    if j.hi == math.inf:
        last = part.n - 1
    else:
        want = Own.LEFT if j.hi_closed else Own.RIGHT
        k = next((k for k in range(len(cuts)) if cuts[k] == j.hi and own[k] is want), None)
        if k is None:
            return None
        last = k
    return (first, last) if first <= last else None


def is_adapted(rep: FGRep, part: Partition) -> bool:
    """True iff every interval of ``rep`` is a union of consecutive partition intervals."""
    return all(_block_span(j, part) is not None for j in rep)


def sigma(rep: FGRep, part: Partition) -> IsoClass:
    """Interval multiset on Q_I of an I-adapted representation."""
    out = []
    for j in rep:
        span = _block_span(j, part)
        if span is None:
            raise AdaptednessError(f"{j!r} is not a union of intervals of {part!r}")
        out.append(DiscreteInterval(span[0] + 1, span[1] + 1))
    return IsoClass(out)


def sigma_inv(cls: IsoClass, part: Partition) -> FGRep:
    blocks = part.blocks()
    out = []
    for j in cls:
        if j.hi > part.n:
            raise PreconditionError(f"{j} does not fit on a partition with {part.n} intervals")
        a, b = blocks[j.lo - 1], blocks[j.hi - 1]
        out.append(RealInterval(a.lo, a.lo_closed, b.hi, b.hi_closed))
    return FGRep(out)


def _require_refinement(coarse: Partition, fine: Partition):
    if not is_refinement(coarse, fine):
        raise PreconditionError(f"{fine!r} does not refine {coarse!r}")


def stretch(cls: IsoClass, coarse: Partition, fine: Partition) -> IsoClass:
    """Move a Q_coarse class to Q_fine: each interval covers the fine vertices inside it."""
    _require_refinement(coarse, fine)
    return sigma(sigma_inv(cls, coarse), fine)


def contract(cls: IsoClass, coarse: Partition, fine: Partition) -> IsoClass | None:
    """Q_coarse class of ``cls`` when its intervals are unions of coarse blocks, else None."""
    _require_refinement(coarse, fine)
    rep = sigma_inv(cls, fine)
    if not is_adapted(rep, coarse):
        return None
    return sigma(rep, coarse)


def _check_level(f: HallFn, ar: ContinuousQuiverA, part: Partition):
    expected = build_quiver(ar, part).quiver
    if f.quiver != expected:
        raise FieldMismatchError(f"function lives on {f.quiver}, partition gives {expected}")


def phi_F(f: HallFn, coarse: Partition, fine: Partition, ar: ContinuousQuiverA) -> HallFn:
    """Linear extension of :func:`stretch` on orbit functions."""
    _require_refinement(coarse, fine)
    _check_level(f, ar, coarse)
    target = build_quiver(ar, fine).quiver
    return HallFn(target, f.field, [(stretch(c, coarse, fine), v) for c, v in f.items()])


def psi_F(f: HallFn, fine: Partition, coarse: Partition, ar: ContinuousQuiverA) -> HallFn:
    """Linear extension of :func:`contract`, dropping classes that do not contract."""
    _require_refinement(coarse, fine)
    _check_level(f, ar, fine)
    target = build_quiver(ar, coarse).quiver
    terms = []
    for c, v in f.items():
        d = contract(c, coarse, fine)
        if d is not None:
            terms.append((d, v))
    return HallFn(target, f.field, terms)


# -- random generators used by tests and verify suites ------------------------------


def random_partition(rng: random.Random, max_cuts: int = 3, grid: Sequence[int] = range(-3, 4),
                     singletons: bool = True) -> Partition:
    pairs: set = set()
    for _ in range(rng.randint(0, max_cuts)):
        c = Fraction(rng.choice(list(grid)), rng.choice([1, 2]))
        o = rng.choice([Own.LEFT, Own.RIGHT])
        if not singletons and any(c == c2 for c2, _ in pairs):
            continue
        pairs.add((c, o))
    return partition_from_pairs(pairs)


def random_refinement(part: Partition, rng: random.Random, extra: int = 2,
                      grid: Sequence[int] = range(-3, 4), singletons: bool = True) -> Partition:
    pairs = set(part.cut_pairs())
    values = {c for c, _ in pairs}
    for _ in range(rng.randint(1, extra)):
        c = Fraction(rng.choice(list(grid)), rng.choice([1, 2, 3]))
        o = rng.choice([Own.LEFT, Own.RIGHT])
        if not singletons and c in values:
            continue
        pairs.add((c, o))
        values.add(c)
    return partition_from_pairs(pairs)


def random_adapted_rep(part: Partition, rng: random.Random, max_intervals: int = 3) -> FGRep:
    n = part.n
    out = []
    for _ in range(rng.randint(0, max_intervals)):
        lo = rng.randint(1, n)
        hi = rng.randint(lo, n)
        out.append(DiscreteInterval(lo, hi))
    return sigma_inv(IsoClass(out), part)


def random_ar(rng: random.Random, max_turns: int = 2) -> ContinuousQuiverA:
    k = rng.randint(0, max_turns)
    S = sorted({Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in range(k)})
    first = rng.choice([Order.LT, Order.GT])
    orders = [first]
    for _ in S:
        orders.append(Order.GT if orders[-1] is Order.LT else Order.LT)
    return ContinuousQuiverA(tuple(S), tuple(orders))
