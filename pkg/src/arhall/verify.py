"""Seeded property suites behind ``arhall verify``.

Every suite draws ``count`` random instances from ``random.Random(seed)``,
checks one identity per instance and reports pass/fail counts together with
the first counterexample.  Reports are deterministic given the seed; timing
is kept out of the report so repeated runs are byte-identical.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .contquiver import (
    FGRep,
    RealInterval,
    build_quiver,
    contract,
    is_adapted,
    phi_F,
    psi_F,
    random_adapted_rep,
    random_ar,
    random_partition,
    random_refinement,
    sigma,
    stretch,
)
from .exactalg import LaurentInt, PrimeField
from .finquiver import (
    Direction,
    IsoClass,
    QuiverA,
    canonical_point,
    decompose,
    iso_classes,
    orbit_size,
    random_conjugate,
    variety_size,
)
from .hallfq import HallFn, random_class, random_class_of_size
from .limits import (
    ContHallFn,
    KbarElement,
    adapted_partition,
    contract_kq,
    cont_product,
    cont_product_at,
    psi_eval,
    theta_eval,
)

DEFAULT_COUNT = 100


@dataclass
class VerifyReport:
    suite: str
    seed: int
    count: int
    passed: int = 0
    failed: int = 0
    first_counterexample: dict | None = None
    elapsed: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "seed": self.seed,
            "count": self.count,
            "passed": self.passed,
            "failed": self.failed,
            "first_counterexample": self.first_counterexample,
        }
        if timing:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out


def random_quiver(rng: random.Random, max_n: int = 3) -> QuiverA:
    n = rng.randint(1, max_n)
    return QuiverA(n, tuple(rng.choice([Direction.FORWARD, Direction.BACKWARD]) for _ in range(n - 1)))


def _classes_with_total(quiver: QuiverA, rng: random.Random, k: int, max_total: int) -> list[IsoClass]:
    total = rng.randint(k - 1, max_total)
    cuts = sorted(rng.randint(0, total) for _ in range(k - 1))
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return [random_class_of_size(quiver, rng, s) for s in sizes]


def _random_hallfn(quiver: QuiverA, field: PrimeField, rng: random.Random, terms: int = 3,
                   max_total: int = 3, max_per_vertex: int | None = None) -> HallFn:
    items = []
    for _ in range(rng.randint(1, terms)):
        c = random_class(quiver, rng, max_total, max_per_vertex)
        items.append((c, Fraction(rng.randint(-5, 5), rng.randint(1, 4))))
    return HallFn(quiver, field, items)


def _random_fgrep(rng: random.Random, max_intervals: int = 3) -> FGRep:
    ivs = []
    for _ in range(rng.randint(0, max_intervals)):
        a, b = sorted(Fraction(rng.randint(-4, 4), rng.choice([1, 2])) for _ in range(2))
        lo_c, hi_c = rng.random() < 0.5, rng.random() < 0.5
        if rng.random() < 0.1:
            a, lo_c = -math.inf, False
        if rng.random() < 0.1:
            b, hi_c = math.inf, False
        if a == b:
            lo_c = hi_c = True
        ivs.append(RealInterval(a, lo_c, b, hi_c))
    return FGRep(ivs)


# -- suites -------------------------------------------------------------------------


def _associativity(rng):
    quiver = random_quiver(rng, 3)
    field = PrimeField(rng.choice([2, 3]))
    a, b, c = (HallFn.char(x, quiver, field) for x in _classes_with_total(quiver, rng, 3, 4))
    lhs, rhs = (a * b) * c, a * (b * c)
    return lhs == rhs, {"quiver": str(quiver), "p": field.p, "factors": [repr(a), repr(b), repr(c)]}


def _phi_hom(rng):
    ar = random_ar(rng)
    coarse = random_partition(rng, max_cuts=2)
    fine = random_refinement(coarse, rng, extra=2)
    field = PrimeField(rng.choice([2, 3]))
    quiver = build_quiver(ar, coarse).quiver
    f = _random_hallfn(quiver, field, rng, terms=2, max_total=2, max_per_vertex=1)
    g = _random_hallfn(quiver, field, rng, terms=2, max_total=2, max_per_vertex=1)
    lhs = phi_F(f * g, coarse, fine, ar)
    rhs = phi_F(f, coarse, fine, ar) * phi_F(g, coarse, fine, ar)
    return lhs == rhs, {"coarse": repr(coarse), "fine": repr(fine), "f": repr(f), "g": repr(g)}


def _psi_phi_id(rng):
    ar = random_ar(rng)
    coarse = random_partition(rng, max_cuts=3)
    fine = random_refinement(coarse, rng, extra=3)
    field = PrimeField(rng.choice([2, 3, 5]))
    f = _random_hallfn(build_quiver(ar, coarse).quiver, field, rng, terms=4, max_total=5)
    back = psi_F(phi_F(f, coarse, fine, ar), fine, coarse, ar)
    return back == f, {"coarse": repr(coarse), "fine": repr(fine), "f": repr(f)}


def _sigma_squares(rng):
    coarse = random_partition(rng, max_cuts=3)
    fine = random_refinement(coarse, rng, extra=3)
    rep = random_adapted_rep(fine, rng)
    adapted = is_adapted(rep, coarse)
    ok = True
    if adapted:
        ok &= sigma(rep, fine) == stretch(sigma(rep, coarse), coarse, fine)
    got = contract(sigma(rep, fine), coarse, fine)
    ok &= got == (sigma(rep, coarse) if adapted else None)
    return ok, {"coarse": repr(coarse), "fine": repr(fine), "rep": repr(rep), "adapted": adapted}


def count_interval_multisets(n: int, dims) -> int:
    """Brute-force count of interval multisets with the given dimension vector."""
    ivs = [(lo, hi) for lo in range(n) for hi in range(lo, n)]
    cap = max(dims, default=0)
    count = 0
    for mult in itertools.product(range(cap + 1), repeat=len(ivs)):
        d = [0] * n
        for (lo, hi), m in zip(ivs, mult):
            for v in range(lo, hi + 1):
                d[v] += m
        count += d == list(dims)
    return count


def _orbit_census(rng):
    quiver = random_quiver(rng, 3)
    dims = tuple(rng.randint(0, 2) for _ in range(quiver.n))
    field = PrimeField(rng.choice([2, 3]))
    classes = iso_classes(quiver, dims)
    total = sum(orbit_size(c, field, quiver) for c in classes)
    ok = total == variety_size(quiver, dims, field.p) and len(classes) == count_interval_multisets(quiver.n, dims)
    return ok, {"quiver": str(quiver), "dims": list(dims), "p": field.p, "sum": total}


def _decompose_roundtrip(rng):
    quiver = random_quiver(rng, 4)
    field = PrimeField(rng.choice([2, 3]))
    cls = random_class(quiver, rng, 3 * quiver.n, max_per_vertex=3)
    pt = random_conjugate(canonical_point(cls, field, quiver), rng)
    got = decompose(pt)
    return got == cls, {"quiver": str(quiver), "p": field.p, "class": repr(cls), "got": repr(got)}


def _theta_welldef(rng):
    ar = random_ar(rng)
    field = PrimeField(rng.choice([2, 3]))
    part = random_partition(rng, max_cuts=2)
    f = ContHallFn(ar, field, [(_random_fgrep(rng), rng.randint(-3, 3)) for _ in range(rng.randint(0, 3))])
    base = adapted_partition(f.support(), base=part)
    via1 = random_refinement(base, rng, extra=2)
    via2 = random_refinement(base, rng, extra=2)
    ok = theta_eval(f, part, via1) == theta_eval(f, part, via2) == theta_eval(f, part)
    return ok, {"partition": repr(part), "via1": repr(via1), "via2": repr(via2), "f": repr(f)}


def _psi_coherence(rng):
    ar = random_ar(rng)
    terms = []
    for _ in range(rng.randint(0, 4)):
        coeff = LaurentInt({rng.randint(-2, 2): rng.randint(-3, 3)})
        terms.append((_random_fgrep(rng), coeff))
    x = KbarElement(ar, terms)
    coarse = random_partition(rng, max_cuts=3)
    fine = random_refinement(coarse, rng, extra=3)
    ok = contract_kq(psi_eval(x, fine), coarse) == psi_eval(x, coarse)
    return ok, {"coarse": repr(coarse), "fine": repr(fine), "x": repr(x)}


def _cont_partition(rng):
    ar = random_ar(rng)
    field = PrimeField(rng.choice([2, 3]))
    f = ContHallFn.char(_random_fgrep(rng, 1), ar, field)
    g = ContHallFn.char(_random_fgrep(rng, 2), ar, field)
    base = adapted_partition(f.support() + g.support())
    finer = random_refinement(base, rng, extra=1)
    ok = cont_product(f, g) == cont_product_at(f, g, finer)
    return ok, {"f": repr(f), "g": repr(g), "finer": repr(finer)}


SUITES: dict[str, Callable] = {
    "associativity": _associativity,
    "phi-hom": _phi_hom,
    "psi-phi-id": _psi_phi_id,
    "sigma-squares": _sigma_squares,
    "orbit-census": _orbit_census,
    "theta-welldef": _theta_welldef,
    "psi-coherence": _psi_coherence,
    "decompose-roundtrip": _decompose_roundtrip,
    "cont-partition": _cont_partition,
}


def run_suite(name: str, seed: int = 0, count: int = DEFAULT_COUNT) -> VerifyReport:
    if name not in SUITES:
        raise KeyError(name)
    check = SUITES[name]
    rng = random.Random(seed)
    report = VerifyReport(name, seed, count)
    start = time.perf_counter()
    for i in range(count):
        ok, instance = check(rng)
        if ok:
            report.passed += 1
        else:
            report.failed += 1
            if report.first_counterexample is None:
                report.first_counterexample = {"index": i, **instance}
    report.elapsed = time.perf_counter() - start
    return report
