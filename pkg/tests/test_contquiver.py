import math
import random
import warnings
from fractions import Fraction

import pytest

from arhall.contquiver import (
    ContinuousQuiverA,
    FGRep,
    Own,
    Partition,
    RealInterval,
    build_quiver,
    common_refinement,
    contract,
    format_rational,
    is_adapted,
    is_refinement,
    partition_from_pairs,
    phi_F,
    psi_F,
    random_adapted_rep,
    random_ar,
    random_partition,
    random_refinement,
    sigma,
    sigma_inv,
    stretch,
    to_rational,
)
from arhall.errors import AdaptednessError, FieldMismatchError, PreconditionError, RefinementConflictError, SchemaError
from arhall.exactalg import PrimeField
from arhall.finquiver import Direction, IsoClass, QuiverA
from arhall.hallfq import HallFn

F, B = Direction.FORWARD, Direction.BACKWARD
L, R = Own.LEFT, Own.RIGHT
LINE = ContinuousQuiverA.line()


def part(cuts, own=L):
    return Partition.uniform([Fraction(c) for c in cuts], own)


def rep(*texts):
    return FGRep(texts)


# -- sample-point oracles -------------------------------------------------------------


def _probe_points(*ivs):
    ends = sorted({e for j in ivs for e in (j.lo, j.hi) if not isinstance(e, float)})
    pts = set(ends)
    pts.update((a + b) / 2 for a, b in zip(ends, ends[1:]))
    if ends:
        pts.update((ends[0] - 1, ends[-1] + 1))
    else:
        pts.add(Fraction(0))
    return pts


def blocks_inside(j, partition):
    """Indices of partition blocks contained in j, decided by sampling membership."""
    inside = []
    for i, b in enumerate(partition.blocks()):
        pts = [x for x in _probe_points(j, b) if x in b]
        member = {x in j for x in pts}
        if member == {True}:
            inside.append(i)
        elif member == {True, False}:
            return None
    return inside


def adapted_oracle(r, partition):
    for j in r:
        inside = blocks_inside(j, partition)
        if not inside or inside != list(range(inside[0], inside[-1] + 1)):
            return False
    return True


def sigma_oracle(r, partition):
    return IsoClass([(min(ix) + 1, max(ix) + 1) for ix in (blocks_inside(j, partition) for j in r)])


# -- parsing and types ---------------------------------------------------------------


def test_rationals():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(-2) == -2
    assert to_rational("-inf") == -math.inf
    with pytest.raises(SchemaError):
        to_rational(0.5)
    with pytest.raises(SchemaError):
        to_rational("1/0")
    assert format_rational(Fraction(-1, 2)) == "-1/2"
    assert format_rational(Fraction(4)) == 4
    assert format_rational(math.inf) == "inf"


def test_real_interval_invariants():
    assert repr(RealInterval.parse("(0,1]")) == "(0,1]"
    assert RealInterval.parse("[2,2]").lo == 2
    for bad in ("(1,1]", "[2,1]", "[-inf,0)", "(0,inf]"):
        with pytest.raises(SchemaError):
            RealInterval.parse(bad)


def test_fgrep_canonical_order():
    assert rep("(1,2]", "(0,1]") == rep("(0,1]", "(1,2]")
    assert rep("(0,2]", "[0,1)").dim_at(Fraction(1, 2)) == 2


def test_partition_invariants():
    p = Partition((0, 0), (R, L))
    assert [repr(b) for b in p.blocks()] == ["(-inf,0)", "[0,0]", "(0,inf)"]
    with pytest.raises(SchemaError):
        Partition((0, 0), (L, L))
    with pytest.raises(SchemaError):
        Partition((1, 0), (L, L))
    with pytest.raises(SchemaError):
        Partition((0,), ())


def test_partition_blocks_cover_line():
    rng = random.Random(3)
    for _ in range(200):
        p = random_partition(rng, max_cuts=5)
        blocks = p.blocks()
        for x in _probe_points(*blocks):
            assert sum(x in b for b in blocks) == 1


def test_ar_validation():
    with pytest.raises(SchemaError):
        ContinuousQuiverA((0,), ("lt",))
    with pytest.raises(SchemaError):
        ContinuousQuiverA((1, 0), ("lt", "gt", "lt"))
    with pytest.warns(UserWarning):
        ContinuousQuiverA((0,), ("lt", "lt"))


# -- build_quiver ---------------------------------------------------------------------


def test_build_quiver_examples():
    ar = ContinuousQuiverA((0,), ("lt", "gt"))
    q, base = build_quiver(ar, part([-1, 0]))
    assert q == QuiverA(3, (F, B)) and base == (-2, Fraction(-1, 2), 1)
    q, base = build_quiver(LINE, part([0, 1]))
    assert q == QuiverA(3, (F, F))
    q, base = build_quiver(LINE, Partition())
    assert q == QuiverA(1, ()) and base == (0,)


def test_build_quiver_reads_the_owned_side():
    ar = ContinuousQuiverA((0,), ("lt", "gt"))
    # cut at the turning point: left-owned reads the right piece, right-owned the left piece
    assert build_quiver(ar, part([0], L)).quiver.directions == (B,)
    assert build_quiver(ar, part([0], R)).quiver.directions == (F,)
    ar2 = ContinuousQuiverA((0,), ("gt", "lt"))
    assert build_quiver(ar2, part([0], L)).quiver.directions == (F,)
    assert build_quiver(ar2, part([0], R)).quiver.directions == (B,)


def test_build_quiver_ignores_spurious_turning_points():
    rng = random.Random(9)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(100):
            ar = random_ar(rng)
            p = random_partition(rng, max_cuts=4)
            extra = Fraction(rng.randint(-6, 6), rng.choice([1, 3]))
            if extra in ar.S:
                continue
            idx = sum(s < extra for s in ar.S)
            padded = ContinuousQuiverA(
                tuple(sorted(ar.S + (extra,))),
                ar.piece_orders[: idx + 1] + ar.piece_orders[idx:],
            )
            assert build_quiver(padded, p) == build_quiver(ar, p)


# -- refinement ---------------------------------------------------------------------


def test_is_refinement_examples():
    assert is_refinement(part([0]), part([0, 1]))
    assert not is_refinement(part([0], L), part([0], R))
    rng = random.Random(4)
    for _ in range(50):
        p = random_partition(rng)
        assert is_refinement(p, p)


def test_common_refinement_examples():
    assert common_refinement(part([0]), part([1])) == part([0, 1])
    assert common_refinement(part([0, 1]), part([1, 2])) == part([0, 1, 2])
    with pytest.raises(RefinementConflictError):
        common_refinement(part([0], L), part([0], R))


def test_common_refinement_refines_both():
    rng = random.Random(8)
    for _ in range(200):
        a = random_partition(rng)
        b = random_refinement(a, rng)
        c = random_refinement(a, rng)
        try:
            m = common_refinement(b, c)
        except RefinementConflictError:
            continue
        assert is_refinement(b, m) and is_refinement(c, m) and is_refinement(a, m)


def test_partition_from_pairs_singleton():
    p = partition_from_pairs({(Fraction(1), L), (Fraction(1), R)})
    assert p.cuts == (1, 1) and p.ownership == (R, L)


# -- adaptedness and sigma ------------------------------------------------------------


def test_adapted_examples():
    p = part([0, 1])
    assert is_adapted(rep("(0,1]"), p)
    assert not is_adapted(rep("(0,1/2]"), p)
    assert not is_adapted(rep("[0,1]"), p)


def test_sigma_examples():
    p = part([0, 1])
    assert sigma(rep("(0,1]"), p) == IsoClass([(2, 2)])
    assert sigma(rep("(-inf,1]"), p) == IsoClass([(1, 2)])
    assert sigma(FGRep(), p) == IsoClass()
    with pytest.raises(AdaptednessError):
        sigma(rep("(0,1/2]"), p)


def _random_label(rng):
    a, b = sorted(Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in range(2))
    lo_c, hi_c = rng.random() < 0.5, rng.random() < 0.5
    if a == b:
        lo_c = hi_c = True
    if rng.random() < 0.15:
        a, lo_c = -math.inf, False
    if rng.random() < 0.15:
        b, hi_c = math.inf, False
    return RealInterval(a, lo_c, b, hi_c)


def test_adaptedness_and_sigma_against_sampling():
    rng = random.Random(12)
    adapted_seen = 0
    for _ in range(2000):
        p = random_partition(rng, max_cuts=5)
        r = FGRep([_random_label(rng) for _ in range(rng.randint(1, 2))])
        expected = adapted_oracle(r, p)
        assert is_adapted(r, p) == expected, (r, p)
        if expected:
            adapted_seen += 1
            assert sigma(r, p) == sigma_oracle(r, p)
            assert sigma_inv(sigma(r, p), p) == r
    assert adapted_seen > 40


# -- stretch / contract -----------------------------------------------------------------


def test_stretch_contract_examples():
    i1, i2 = part([0]), part([-1, 0])
    assert stretch(IsoClass([(1, 1)]), i1, i2) == IsoClass([(1, 2)])
    assert stretch(IsoClass([(1, 2)]), i1, i1) == IsoClass([(1, 2)])
    assert stretch(IsoClass(), i1, i2) == IsoClass()
    assert contract(IsoClass([(1, 2)]), i1, i2) == IsoClass([(1, 1)])
    assert contract(IsoClass([(1, 1)]), i1, i2) is None
    assert contract(IsoClass(), i1, i2) == IsoClass()
    with pytest.raises(PreconditionError):
        stretch(IsoClass([(1, 1)]), i2, i1)


def _nested(rng):
    a = random_partition(rng, max_cuts=2)
    b = random_refinement(a, rng, extra=2)
    c = random_refinement(b, rng, extra=2)
    return a, b, c


def test_transitivity():
    rng = random.Random(21)
    for _ in range(200):
        a, b, c = _nested(rng)
        cls = sigma(random_adapted_rep(a, rng), a)
        assert stretch(stretch(cls, a, b), b, c) == stretch(cls, a, c)
        fine = sigma(random_adapted_rep(c, rng), c)
        step = contract(fine, b, c)
        two_step = None if step is None else contract(step, a, b)
        assert two_step == contract(fine, a, c)


def test_sigma_naturality_squares():
    rng = random.Random(22)
    branches = set()
    for _ in range(300):
        coarse = random_partition(rng)
        fine = random_refinement(coarse, rng)
        r = random_adapted_rep(fine, rng)
        adapted = is_adapted(r, coarse)
        branches.add(adapted)
        if adapted:
            assert sigma(r, fine) == stretch(sigma(r, coarse), coarse, fine)
            assert contract(sigma(r, fine), coarse, fine) == sigma(r, coarse)
        else:
            assert contract(sigma(r, fine), coarse, fine) is None
    assert branches == {True, False}


# -- phi_F / psi_F -----------------------------------------------------------------------


def test_phi_psi_examples():
    ar = LINE
    i1, i2 = part([0]), part([-1, 0])
    q1, q2 = build_quiver(ar, i1).quiver, build_quiver(ar, i2).quiver
    f2 = PrimeField(2)
    s1, s2 = IsoClass([(1, 1)]), IsoClass([(2, 2)])
    f = HallFn(q1, f2, {s1: 1, s2: 2})
    expected = HallFn(q2, f2, {stretch(s1, i1, i2): 1, stretch(s2, i1, i2): 2})
    assert phi_F(f, i1, i2, ar) == expected
    assert psi_F(expected, i2, i1, ar) == f
    assert psi_F(HallFn.char(IsoClass([(1, 1)]), q2, f2), i2, i1, ar) == HallFn.zero(q1, f2)
    with pytest.raises(FieldMismatchError):
        phi_F(HallFn.char(s1, q2, f2), i1, i2, ar)


def test_psi_phi_identity_random():
    rng = random.Random(23)
    for _ in range(100):
        ar = random_ar(rng)
        a = random_partition(rng)
        b = random_refinement(a, rng)
        q = build_quiver(ar, a).quiver
        terms = [(sigma(random_adapted_rep(a, rng), a), Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
                 for _ in range(3)]
        f = HallFn(q, PrimeField(3), terms)
        assert psi_F(phi_F(f, a, b, ar), b, a, ar) == f
