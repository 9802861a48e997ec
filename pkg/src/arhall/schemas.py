"""JSON wire formats for every object the command line reads or writes.

``parse_*`` functions raise :class:`SchemaError` on malformed documents;
``dump_*`` functions return plain JSON-compatible values.  Rationals travel as
integers or ``"p/q"`` strings, infinities as ``"inf"`` / ``"-inf"``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .contquiver import ContinuousQuiverA, FGRep, Partition, RealInterval, format_rational, to_rational
from .errors import ArhallError, SchemaError
from .exactalg import IntPoly, LaurentInt, MatrixFp, PrimeField
from .finquiver import IsoClass, QuiverA, RepPoint
from .hallfq import HallFn
from .limits import ContHallFn, KbarElement, KQElement


def _field(doc: dict, key: str, kind=None, optional=False):
    if not isinstance(doc, dict):
        raise SchemaError(f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        if optional:
            return None
        raise SchemaError(f"missing key {key!r}")
    val = doc[key]
    if kind is not None and not (isinstance(val, kind) and not (kind is int and isinstance(val, bool))):
        raise SchemaError(f"{key!r} should be {getattr(kind, '__name__', kind)}, got {val!r}")
    return val


def _int(x, what: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise SchemaError(f"{what} should be an integer, got {x!r}")
    return x


def _wrap(fn, *args):
    # library constructors raise SchemaError/PreconditionError themselves; anything else is malformed input
    try:
        return fn(*args)
    except ArhallError:
        raise
    except (TypeError, ValueError, KeyError, IndexError) as exc:
        raise SchemaError(str(exc)) from exc


def parse_field(p) -> PrimeField:
    return PrimeField(_int(p, "p"))


# -- finite side ---------------------------------------------------------------


def parse_quiver(doc: dict) -> QuiverA:
    n = _int(_field(doc, "n"), "n")
    dirs = _field(doc, "directions", list)
    return _wrap(QuiverA, n, tuple(dirs))


def dump_quiver(q: QuiverA) -> dict:
    return {"n": q.n, "directions": [d.value for d in q.directions]}


def parse_isoclass(doc: dict) -> IsoClass:
    ivs = _field(doc, "intervals", list)
    out = []
    for j in ivs:
        if not (isinstance(j, list) and len(j) == 2):
            raise SchemaError(f"interval should be [lo, hi], got {j!r}")
        out.append((_int(j[0], "lo"), _int(j[1], "hi")))
    return _wrap(IsoClass, out)


def dump_isoclass(c: IsoClass) -> dict:
    return {"intervals": [[j.lo, j.hi] for j in c]}


def parse_reppoint(doc: dict) -> RepPoint:
    quiver = parse_quiver(doc)
    field = parse_field(_field(doc, "p"))
    dims = [_int(d, "dimension") for d in _field(doc, "dims", list)]
    if len(dims) != quiver.n:
        raise SchemaError(f"dims has length {len(dims)}, quiver has {quiver.n} vertices")
    maps = _field(doc, "maps", list)
    if len(maps) != quiver.n - 1:
        raise SchemaError(f"expected {quiver.n - 1} maps, got {len(maps)}")
    mats = []
    for h, ((s, t), m) in enumerate(zip(quiver.arrows(), maps)):
        if not isinstance(m, list) or len(m) != dims[t] or any(
            not isinstance(r, list) or len(r) != dims[s] for r in m
        ):
            raise SchemaError(f"map of arrow {h + 1} should be a {dims[t]}x{dims[s]} list of rows")
        rows = [[_int(x, "matrix entry") for x in r] for r in m]
        mats.append(MatrixFp.from_rows(rows, field, dims[s]))
    return _wrap(RepPoint, quiver, tuple(dims), tuple(mats), field)


def dump_reppoint(pt: RepPoint) -> dict:
    d = dump_quiver(pt.quiver)
    d.update({"dims": list(pt.dims), "p": pt.field.p, "maps": [m.to_rows() for m in pt.maps]})
    return d


def _parse_ratio(term: dict) -> Fraction:
    num = _int(_field(term, "num"), "num")
    den = _field(term, "den", optional=True)
    den = 1 if den is None else _int(den, "den")
    if den == 0:
        raise SchemaError("zero denominator")
    return Fraction(num, den)


def parse_hallfn(doc: dict) -> HallFn:
    quiver = parse_quiver(_field(doc, "quiver", dict))
    field = parse_field(_field(doc, "p"))
    terms = [(parse_isoclass(_field(t, "class", dict)), _parse_ratio(t)) for t in _field(doc, "terms", list)]
    return _wrap(HallFn, quiver, field, terms)


def dump_hallfn(f: HallFn) -> dict:
    return {
        "quiver": dump_quiver(f.quiver),
        "p": f.field.p,
        "terms": [
            {"class": dump_isoclass(c), "num": v.numerator, "den": v.denominator} for c, v in f.items()
        ],
    }


def dump_intpoly(poly: IntPoly) -> dict:
    return {"coeffs": list(poly.coeffs), "text": str(poly)}


# -- continuous side ---------------------------------------------------------------


def _rational(x):
    return _wrap(to_rational, x)


def parse_ar(doc: dict) -> ContinuousQuiverA:
    S = [_rational(s) for s in _field(doc, "S", list)]
    orders = _field(doc, "orders", list)
    return _wrap(ContinuousQuiverA, tuple(S), tuple(orders))


def dump_ar(ar: ContinuousQuiverA) -> dict:
    return {"S": [format_rational(s) for s in ar.S], "orders": [o.value for o in ar.piece_orders]}


def parse_partition(doc: dict) -> Partition:
    cuts = [_rational(c) for c in _field(doc, "cuts", list)]
    own = _field(doc, "ownership", list)
    return _wrap(Partition, tuple(cuts), tuple(own))


def dump_partition(part: Partition) -> dict:
    return {"cuts": [format_rational(c) for c in part.cuts], "ownership": [o.value for o in part.ownership]}


def parse_interval(doc: dict) -> RealInterval:
    lo = _rational(_field(doc, "lo"))
    hi = _rational(_field(doc, "hi"))
    return _wrap(RealInterval, lo, _field(doc, "lo_closed", bool), hi, _field(doc, "hi_closed", bool))


def dump_interval(j: RealInterval) -> dict:
    return {
        "lo": format_rational(j.lo),
        "lo_closed": j.lo_closed,
        "hi": format_rational(j.hi),
        "hi_closed": j.hi_closed,
    }


def parse_fgrep(doc: dict) -> FGRep:
    return FGRep([parse_interval(j) for j in _field(doc, "intervals", list)])


def dump_fgrep(rep: FGRep) -> dict:
    return {"intervals": [dump_interval(j) for j in rep]}


def parse_conthallfn(doc: dict) -> ContHallFn:
    ar = parse_ar(_field(doc, "quiver", dict))
    field = parse_field(_field(doc, "p"))
    terms = [(parse_fgrep(_field(t, "rep", dict)), _parse_ratio(t)) for t in _field(doc, "terms", list)]
    return ContHallFn(ar, field, terms)


def dump_conthallfn(f: ContHallFn) -> dict:
    return {
        "quiver": dump_ar(f.ar),
        "p": f.field.p,
        "terms": [{"rep": dump_fgrep(r), "num": v.numerator, "den": v.denominator} for r, v in f.items()],
    }


def parse_laurent(doc: list) -> LaurentInt:
    if not isinstance(doc, list):
        raise SchemaError(f"Laurent coefficient should be a list of {{exp, coef}}, got {doc!r}")
    return LaurentInt((_int(_field(t, "exp"), "exp"), _int(_field(t, "coef"), "coef")) for t in doc)


def dump_laurent(c: LaurentInt) -> list:
    return [{"exp": e, "coef": k} for e, k in c.items()]


def parse_kbar(doc: dict) -> KbarElement:
    ar = parse_ar(_field(doc, "quiver", dict))
    terms = [
        (parse_fgrep(_field(t, "rep", dict)), parse_laurent(_field(t, "coeff", list)))
        for t in _field(doc, "terms", list)
    ]
    return KbarElement(ar, terms)


def dump_kbar(x: KbarElement) -> dict:
    return {
        "quiver": dump_ar(x.ar),
        "terms": [{"rep": dump_fgrep(r), "coeff": dump_laurent(c)} for r, c in x.items()],
    }


def parse_kq(doc: dict) -> KQElement:
    part = parse_partition(_field(doc, "partition", dict))
    terms = [
        (parse_isoclass(_field(t, "class", dict)), parse_laurent(_field(t, "coeff", list)))
        for t in _field(doc, "terms", list)
    ]
    return _wrap(KQElement, part, terms)


def dump_kq(x: KQElement) -> dict:
    return {
        "partition": dump_partition(x.partition),
        "terms": [{"class": dump_isoclass(c), "coeff": dump_laurent(v)} for c, v in x.items()],
    }


PARSERS: dict[str, Any] = {
    "quiver": (parse_quiver, dump_quiver),
    "isoclass": (parse_isoclass, dump_isoclass),
    "reppoint": (parse_reppoint, dump_reppoint),
    "hallfn": (parse_hallfn, dump_hallfn),
    "ar": (parse_ar, dump_ar),
    "partition": (parse_partition, dump_partition),
    "fgrep": (parse_fgrep, dump_fgrep),
    "conthallfn": (parse_conthallfn, dump_conthallfn),
    "kbar": (parse_kbar, dump_kbar),
    "kq": (parse_kq, dump_kq),
}
