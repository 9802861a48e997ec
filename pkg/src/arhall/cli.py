"""Batch command line: JSON document in, JSON document out.

Exit codes: 0 success, 2 schema error, 3 precondition error, 4 resource
budget exceeded, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Callable

from . import schemas as S
from .contquiver import build_quiver, contract, format_rational, sigma, stretch
from .errors import ArhallError, PolynomialityError, PreconditionError, ResourceBudgetError, SchemaError
from .exactalg import PrimeField
from .finquiver import decompose
from .hallfq import DEFAULT_BUDGET, hall_number, hall_polynomial, hall_product
from .limits import cont_product, psi_eval, theta_eval
from .verify import DEFAULT_COUNT, SUITES, run_suite

log = logging.getLogger("arhall")

EXIT_OK, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_RESOURCE, EXIT_VERIFY = 0, 2, 3, 4, 5


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, SchemaError):
        return EXIT_SCHEMA
    if isinstance(exc, ResourceBudgetError):
        return EXIT_RESOURCE
    if isinstance(exc, PolynomialityError):
        return EXIT_VERIFY
    return EXIT_PRECONDITION


def _field_for(doc: dict, args, key: str = "p") -> PrimeField:
    """Prime from the document, from --q, or both (then they must agree)."""
    in_doc = doc.get(key) if isinstance(doc, dict) else None
    if in_doc is not None and args.q is not None and in_doc != args.q:
        raise PreconditionError(f"document says p={in_doc} but --q {args.q}")
    p = in_doc if in_doc is not None else args.q
    if p is None:
        raise SchemaError("no prime given: set 'p' in the document or pass --q")
    return S.parse_field(p)


def _check_q(field: PrimeField, args):
    if args.q is not None and args.q != field.p:
        raise PreconditionError(f"input is over F_{field.p} but --q {args.q}")


def cmd_decompose(doc, args):
    if "p" not in doc and args.q is not None:
        doc = {**doc, "p": args.q}
    pt = S.parse_reppoint(doc)
    _check_q(pt.field, args)
    return S.dump_isoclass(decompose(pt))


def _triple(doc):
    quiver = S.parse_quiver(S._field(doc, "quiver", dict))
    return quiver, [S.parse_isoclass(S._field(doc, k, dict)) for k in ("total", "quot", "sub")]


def cmd_hall_num(doc, args):
    quiver, (total, quot, sub) = _triple(doc)
    field = _field_for(doc, args)
    return {"count": hall_number(total, quot, sub, field, quiver, args.budget)}


def cmd_hall_product(doc, args):
    f = S.parse_hallfn(S._field(doc, "f", dict))
    g = S.parse_hallfn(S._field(doc, "g", dict))
    _check_q(f.field, args)
    return S.dump_hallfn(hall_product(f, g, args.budget))


def cmd_hall_poly(doc, args):
    quiver, (total, quot, sub) = _triple(doc)
    return S.dump_intpoly(hall_polynomial(total, quot, sub, quiver, args.budget))


def cmd_quiver_of_partition(doc, args):
    ar = S.parse_ar(S._field(doc, "quiver", dict))
    part = S.parse_partition(S._field(doc, "partition", dict))
    quiver, base = build_quiver(ar, part)
    out = S.dump_quiver(quiver)
    out["basepoints"] = [format_rational(b) for b in base]
    return out


def cmd_sigma(doc, args):
    rep = S.parse_fgrep(S._field(doc, "rep", dict))
    part = S.parse_partition(S._field(doc, "partition", dict))
    return S.dump_isoclass(sigma(rep, part))


def _transfer_args(doc):
    cls = S.parse_isoclass(S._field(doc, "class", dict))
    coarse = S.parse_partition(S._field(doc, "coarse", dict))
    fine = S.parse_partition(S._field(doc, "fine", dict))
    return cls, coarse, fine


def cmd_stretch(doc, args):
    return S.dump_isoclass(stretch(*_transfer_args(doc)))


def cmd_contract(doc, args):
    got = contract(*_transfer_args(doc))
    return {"class": None if got is None else S.dump_isoclass(got)}


def cmd_cont_product(doc, args):
    f = S.parse_conthallfn(S._field(doc, "f", dict))
    g = S.parse_conthallfn(S._field(doc, "g", dict))
    _check_q(f.field, args)
    return S.dump_conthallfn(cont_product(f, g, args.budget))


def cmd_theta(doc, args):
    f = S.parse_conthallfn(S._field(doc, "f", dict))
    part = S.parse_partition(S._field(doc, "partition", dict))
    _check_q(f.field, args)
    return S.dump_hallfn(theta_eval(f, part))


def cmd_psi_eval(doc, args):
    x = S.parse_kbar(S._field(doc, "x", dict))
    part = S.parse_partition(S._field(doc, "partition", dict))
    return S.dump_kq(psi_eval(x, part))


COMMANDS: dict[str, tuple[Callable[[Any, argparse.Namespace], Any], str]] = {
    "decompose": (cmd_decompose, "interval decomposition of a representation point"),
    "hall-num": (cmd_hall_num, "Hall number of (total; quot, sub)"),
    "hall-product": (cmd_hall_product, "product f * g of two Hall functions"),
    "hall-poly": (cmd_hall_poly, "Hall polynomial by interpolation over primes"),
    "quiver-of-partition": (cmd_quiver_of_partition, "finite quiver and basepoints of a partition"),
    "sigma": (cmd_sigma, "interval multiset of an adapted representation"),
    "stretch": (cmd_stretch, "move a class to a refinement"),
    "contract": (cmd_contract, "move a class back from a refinement, or null"),
    "cont-product": (cmd_cont_product, "Hall product on the continuous quiver"),
    "theta": (cmd_theta, "evaluate a continuous Hall function at a partition"),
    "psi-eval": (cmd_psi_eval, "project a canonical-basis combination to a partition"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="infile", default="-", help="input JSON path (default stdin)")
    common.add_argument("--out", default="-", help="output path (default stdout)")
    common.add_argument("--q", type=int, default=None, help="prime field size")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of graded subspaces enumerated per Hall number")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="arhall", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    v = sub.add_parser("verify", parents=[common], help="run a seeded property suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--count", type=int, default=DEFAULT_COUNT)
    v.add_argument("--timing", action="store_true", help="include elapsed seconds in the report")
    return parser


def _table(obj, indent: str = "") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.extend(_table(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{indent}-")
                lines.extend(_table(item, indent + "  "))
            else:
                lines.append(f"{indent}- {json.dumps(item)}")
    else:
        lines.append(f"{indent}{json.dumps(obj)}")
    return lines


def render(obj, fmt: str) -> str:
    if fmt == "table":
        return "\n".join(_table(obj)) + "\n"
    return json.dumps(obj, indent=2) + "\n"


def _read_input(path: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc


def execute(args: argparse.Namespace) -> tuple[int, Any]:
    try:
        if args.budget <= 0:
            raise SchemaError("--budget must be positive")
        if args.q is not None:
            PrimeField(args.q)
        if args.command == "verify":
            if args.count <= 0:
                raise SchemaError("--count must be positive")
            report = run_suite(args.suite, args.seed, args.count)
            log.info("suite %s: %d passed, %d failed in %.2fs", args.suite, report.passed, report.failed,
                     report.elapsed)
            return (EXIT_OK if report.ok else EXIT_VERIFY), report.to_json(args.timing)
        doc = _read_input(args.infile)
        if not isinstance(doc, dict):
            raise SchemaError("input document must be a JSON object")
        fn, _ = COMMANDS[args.command]
        return EXIT_OK, fn(doc, args)
    except ArhallError as exc:
        return exit_code(exc), {"error": {"kind": exc.kind, "detail": str(exc)}}
    except OSError as exc:
        return EXIT_SCHEMA, {"error": {"kind": "io", "detail": str(exc)}}


def run(argv: list[str]) -> tuple[int, Any]:
    """Execute one command line; returns (exit status, output document)."""
    return execute(build_parser().parse_args(argv))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    status, out = execute(args)
    text = render(out, args.format)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
