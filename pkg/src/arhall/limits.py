"""Hall algebra of a continuous type-A quiver and the canonical-basis module.

A direct-limit class is stored in normal form: a finitely supported function
on iso-classes of finitely generated representations (``ContHallFn``).  Any
partition adapted to the support computes the same product; the coarsest one
is used by default.

Elements of the inverse-limit module are finite Z[v, v^-1]-combinations of
canonical-basis labels (``KbarElement``).  They are only ever evaluated
against finitely many partitions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .contquiver import (
    ContinuousQuiverA,
    FGRep,
    Own,
    Partition,
    build_quiver,
    contract,
    is_adapted,
    is_refinement,
    partition_from_pairs,
    psi_F,
    sigma,
    sigma_inv,
)
from .errors import AdaptednessError, FieldMismatchError, PreconditionError
from .exactalg import LaurentInt, PrimeField
from .finquiver import IsoClass
from .hallfq import DEFAULT_BUDGET, HallFn, hall_product


def _endpoint_pairs(rep: FGRep):
    for j in rep:
        if not isinstance(j.lo, float):
            yield (j.lo, Own.RIGHT if j.lo_closed else Own.LEFT)
        if not isinstance(j.hi, float):
            yield (j.hi, Own.LEFT if j.hi_closed else Own.RIGHT)


def adapted_partition(labels: Iterable[FGRep], base: Partition | None = None) -> Partition:
    """Coarsest partition (refining ``base``) to which every label is adapted.

    A cut value where one interval needs a closed end and another an open one
    gets both flags, producing the singleton block [a, a]; adding cuts this way
    always refines ``base``, so no conflict can arise.
    """
    pairs = set(base.cut_pairs()) if base is not None else set()
    for rep in labels:
        pairs.update(_endpoint_pairs(rep))
    return partition_from_pairs(pairs)


class ContHallFn:
    """Finitely supported function on iso-classes of representations of A_R."""

    __slots__ = ("ar", "field", "_coeffs")

    def __init__(self, ar: ContinuousQuiverA, field: PrimeField, coeffs: Mapping | Iterable = ()):
        self.ar = ar
        self.field = field
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[FGRep, Fraction] = defaultdict(Fraction)
        for rep, c in items:
            if not isinstance(rep, FGRep):
                rep = FGRep(rep)
            acc[rep] += Fraction(c)
        self._coeffs = {k: acc[k] for k in sorted(acc) if acc[k]}

    @classmethod
    def char(cls, rep: FGRep, ar: ContinuousQuiverA, field: PrimeField, coeff=1) -> ContHallFn:
        return cls(ar, field, {rep: coeff})

    @classmethod
    def one(cls, ar: ContinuousQuiverA, field: PrimeField) -> ContHallFn:
        return cls(ar, field, {FGRep(): 1})

    @property
    def coeffs(self) -> dict[FGRep, Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def support(self) -> list[FGRep]:
        return list(self._coeffs)

    def __getitem__(self, rep: FGRep) -> Fraction:
        return self._coeffs.get(rep, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def _check(self, other: ContHallFn):
        if not isinstance(other, ContHallFn):
            raise FieldMismatchError(f"expected ContHallFn, got {type(other).__name__}")
        if self.ar != other.ar or self.field != other.field:
            raise FieldMismatchError("ContHallFn operands over different quivers or fields")

    def __add__(self, other: ContHallFn) -> ContHallFn:
        self._check(other)
        return ContHallFn(self.ar, self.field, list(self.items()) + list(other.items()))

    def scale(self, c) -> ContHallFn:
        c = Fraction(c)
        return ContHallFn(self.ar, self.field, {k: c * v for k, v in self.items()})

    def __mul__(self, other):
        if isinstance(other, ContHallFn):
            return cont_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ContHallFn)
            and self.ar == other.ar
            and self.field == other.field
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.ar, self.field, tuple(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "ContHallFn(0)"
        return "ContHallFn(" + " + ".join(f"{v}*1_{k}" for k, v in self.items()) + ")"


def lift(f: ContHallFn, part: Partition) -> HallFn:
    """The function on Q_I with the same values, for a partition adapted to supp f."""
    quiver = build_quiver(f.ar, part).quiver
    terms = []
    for rep, c in f.items():
        if not is_adapted(rep, part):
            raise AdaptednessError(f"{rep!r} is not adapted to {part!r}")
        terms.append((sigma(rep, part), c))
    return HallFn(quiver, f.field, terms)


def descend(h: HallFn, part: Partition, ar: ContinuousQuiverA) -> ContHallFn:
    """Inverse of :func:`lift`."""
    return ContHallFn(ar, h.field, [(sigma_inv(c, part), v) for c, v in h.items()])


def cont_product_at(f: ContHallFn, g: ContHallFn, part: Partition, budget: int = DEFAULT_BUDGET) -> ContHallFn:
    """Product computed on Q_I for a given partition adapted to both supports."""
    f._check(g)
    prod = hall_product(lift(f, part), lift(g, part), budget)
    return descend(prod, part, f.ar)


def cont_product(f: ContHallFn, g: ContHallFn, budget: int = DEFAULT_BUDGET) -> ContHallFn:
    """Hall product on A_R; ``f`` on the quotient side as in the finite case."""
    f._check(g)
    part = adapted_partition(f.support() + g.support())
    return cont_product_at(f, g, part, budget)


def theta_eval(f: ContHallFn, part: Partition, via: Partition | None = None) -> HallFn:
    """Value of ``f`` as a function on Q_I.

    ``f`` is lifted to a partition ``via`` refining ``part`` and adapted to its
    support, then contracted down to ``part``.  ``via`` defaults to the
    coarsest such partition; the result does not depend on the choice.
    """
    if via is None:
        via = adapted_partition(f.support(), base=part)
    elif not is_refinement(part, via):
        raise PreconditionError(f"{via!r} does not refine {part!r}")
    return psi_F(lift(f, via), via, part, f.ar)


@dataclass(frozen=True)
class CanonicalLabel:
    """The basis element [IC_O_V [n](n/2)], i.e. v^shift times the label of ``rep``."""

    rep: FGRep
    shift: int = 0


class _LaurentTerms:
    __slots__ = ("_terms",)

    def _init_terms(self, terms, key_type):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for k, c in items:
            if not isinstance(k, key_type):
                k = key_type(k)
            if isinstance(c, int):
                c = LaurentInt.const(c)
            acc[k] = acc.get(k, LaurentInt()) + c
        self._terms = {k: acc[k] for k in sorted(acc) if acc[k]}

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, k) -> LaurentInt:
        return self._terms.get(k, LaurentInt())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)


class KbarElement(_LaurentTerms):
    """Finite Z[v, v^-1]-combination of canonical-basis labels."""

    __slots__ = ("ar",)

    def __init__(self, ar: ContinuousQuiverA, terms: Mapping | Iterable = ()):
        self.ar = ar
        self._init_terms(terms, FGRep)

    @classmethod
    def basis(cls, rep: FGRep, ar: ContinuousQuiverA, shift: int = 0) -> KbarElement:
        return cls(ar, {rep: LaurentInt.v(shift)})

    def labels(self) -> list[tuple[CanonicalLabel, int]]:
        """Integer coefficients on the Z-basis {(V, n)}."""
        return [(CanonicalLabel(rep, e), c) for rep, lc in self.items() for e, c in lc.items()]

    def _check(self, other: KbarElement):
        if not isinstance(other, KbarElement):
            raise FieldMismatchError(f"expected KbarElement, got {type(other).__name__}")
        if self.ar != other.ar:
            raise FieldMismatchError("KbarElement operands over different continuous quivers")

    def __add__(self, other: KbarElement) -> KbarElement:
        self._check(other)
        return KbarElement(self.ar, list(self.items()) + list(other.items()))

    def __rmul__(self, c: LaurentInt | int) -> KbarElement:
        return KbarElement(self.ar, {k: c * v for k, v in self.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, KbarElement) and self.ar == other.ar and self._terms == other._terms

    def __hash__(self):
        return hash((self.ar, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "KbarElement(0)"
        return "KbarElement(" + " + ".join(f"({v})[{k}]" for k, v in self.items()) + ")"


class KQElement(_LaurentTerms):
    """Element of the Grothendieck group of Q_I in the basis of IC labels."""

    __slots__ = ("partition",)

    def __init__(self, partition: Partition, terms: Mapping | Iterable = ()):
        self.partition = partition
        self._init_terms(terms, IsoClass)
        for cls in self._terms:
            if any(j.hi > partition.n for j in cls):
                raise PreconditionError(f"{cls} does not fit on a partition with {partition.n} intervals")

    def __eq__(self, other) -> bool:
        return isinstance(other, KQElement) and self.partition == other.partition and self._terms == other._terms

    def __hash__(self):
        return hash((self.partition, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "KQElement(0)"
        return "KQElement(" + " + ".join(f"({v})[{k}]" for k, v in self.items()) + ")"


def psi_eval(x: KbarElement, part: Partition) -> KQElement:
    """Projection of ``x`` to level ``part``: adapted labels map through sigma, others vanish."""
    terms = [(sigma(rep, part), c) for rep, c in x.items() if is_adapted(rep, part)]
    return KQElement(part, terms)


def contract_kq(x: KQElement, coarse: Partition) -> KQElement:
    """Transfer an element at a finer level down to ``coarse`` on IC labels."""
    terms = []
    for cls, c in x.items():
        d = contract(cls, coarse, x.partition)
        if d is not None:
            terms.append((d, c))
    return KQElement(coarse, terms)


def v_act(x: KbarElement, k: int) -> KbarElement:
    """Multiply by v^k, i.e. shift every label (V, n) to (V, n + k)."""
    return KbarElement(x.ar, {rep: c.shift(k) for rep, c in x.items()})


def kbar_equal(x: KbarElement, y: KbarElement) -> bool:
    x._check(y)
    return x == y
