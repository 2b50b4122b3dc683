"""Command-line front end.

Data goes to stdout (JSON by default, CSV with --format csv); diagnostics go
to stderr.  Exit codes: 0 success, 1 domain error, 2 a FAIL verdict in
``verify``, 3 precision exhausted, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from .bounds import Verdict, reports_to_csv, reports_to_json, verify_suite
from .errors import DomainError, PrecisionExhausted
from .families import an_necessary_conditions, laguerre_poly
from .heights import height_additive, height_multiplicative, mahler_from_poly
from .perms import GroupTag, generator_criterion
from .poly import IntPoly
from .roots import find_roots
from .snfun import c_n, s_n_bruteforce, s_n_closed_zz

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_FAIL = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64


class UsageError(Exception):
    def __init__(self, message: str, reported: bool = False):
        super().__init__(message)
        self.reported = reported


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message, reported=True)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _poly_spec(text: str) -> IntPoly:
    kind, _, arg = text.partition(":")
    if kind == "laguerre" and arg.isdigit():
        return laguerre_poly(int(arg))
    raise argparse.ArgumentTypeError(f"unknown polynomial {text!r} (try laguerre:N)")


def _group(text: str) -> GroupTag:
    try:
        return GroupTag.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _tol(text: str):
    try:
        value = mpmath.mpf(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _add_poly_args(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs", type=_int_list, help="integer coefficients, constant term first")
    src.add_argument("--poly", type=_poly_spec, help="named polynomial, e.g. laguerre:8")
    p.add_argument("--bits", type=int, default=256, help="working precision in bits (default 256)")


def _add_format(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heightlab", description="Mahler measures and heights of conjugate combinations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("roots", help="certified root enclosures")
    _add_poly_args(p)
    _add_format(p)

    p = sub.add_parser("mahler", help="log Mahler measure of the polynomial")
    _add_poly_args(p)
    p.add_argument("--tol", type=_tol, default=mpmath.mpf("1e-10"))
    _add_format(p)

    for name in ("height-mult", "height-add"):
        p = sub.add_parser(name, help=f"{'multiplicative' if name == 'height-mult' else 'additive'} combination height")
        _add_poly_args(p)
        p.add_argument("--a", type=_int_list, required=True, help="exponent / coefficient vector")
        p.add_argument("--group", type=_group, default=GroupTag.ALTERNATING)
        p.add_argument("--tol", type=_tol, default=mpmath.mpf("1e-10"))
        _add_format(p)

    p = sub.add_parser("sn", help="s_n(x, y) exactly, or the closed form for z^(n,h), z^(n,k)")
    p.add_argument("--x", type=_fraction_list)
    p.add_argument("--y", type=_fraction_list)
    p.add_argument("--n", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--group", type=_group, default=GroupTag.ALTERNATING)
    _add_format(p)

    p = sub.add_parser("cn", help="c_n with its argmin and c_n sqrt(pi n / 2)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true", help="evaluate every (h, k) exactly")
    _add_format(p)

    p = sub.add_parser("check-generator", help="does the combination generate the Galois closure")
    p.add_argument("--a", type=_int_list, required=True)
    p.add_argument("--group", type=_group, required=True)
    _add_format(p)

    def laguerre_args(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--conditions", action="store_true", help="also report A_n necessary conditions")
        _add_format(p)

    laguerre_args(sub.add_parser("laguerre", help="truncated exponential polynomial n! e_n(x)"))
    fam = sub.add_parser("families", help="polynomial families")
    fam_sub = fam.add_subparsers(dest="family", required=True, parser_class=_Parser)
    laguerre_args(fam_sub.add_parser("laguerre", help="truncated exponential polynomial"))

    p = sub.add_parser("verify", help="run the inequality suite")
    _add_poly_args(p)
    p.add_argument("--a", type=_int_list, required=True)
    p.add_argument("--group", type=_group, required=True)
    p.add_argument("--mode", choices=("multiplicative", "additive"), required=True)
    p.add_argument("--tol", type=_tol, default=mpmath.mpf("1e-10"))
    _add_format(p)
    return parser


def _poly_from(args) -> IntPoly:
    return args.poly if args.poly is not None else IntPoly(args.coeffs)


def _target_bits(args) -> int:
    return max(args.bits - 64, 32)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if rows:
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([json.dumps(v) if isinstance(v, (list, dict)) else v for v in row.values()])
    return buf.getvalue()


def _emit(data, fmt: str, rows=None):
    if fmt == "csv":
        sys.stdout.write(_csv(rows if rows is not None else [data]))
    else:
        sys.stdout.write(json.dumps(data) + "\n")


def _cmd_roots(args):
    cs = find_roots(_poly_from(args), _target_bits(args))
    data = cs.to_json()
    rows = [{"index": i + 1, **r} for i, r in enumerate(data["roots"])]
    _emit(data, args.format, rows)
    return EXIT_OK


def _cmd_mahler(args):
    p = _poly_from(args)
    cs = find_roots(p, _target_bits(args))
    hv = mahler_from_poly(p, cs, args.tol)
    _emit({"polynomial": [str(c) for c in p.coeffs], "log_mahler": hv.to_json()}, args.format,
          [{"log_mahler": hv.to_json()["value"], **{k: v for k, v in hv.to_json().items() if k != "value"}}])
    return EXIT_OK


def _cmd_height(args, additive: bool):
    p = _poly_from(args)
    cs = find_roots(p, _target_bits(args))
    fn = height_additive if additive else height_multiplicative
    hv = fn(cs, args.a, args.group, args.tol)
    data = {"mode": "additive" if additive else "multiplicative", "group": args.group.value, "height": hv.to_json()}
    _emit(data, args.format, [hv.to_json()])
    return EXIT_OK


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _cmd_sn(args):
    if args.x is not None and args.y is not None:
        value = s_n_bruteforce(args.x, args.y, args.group)
        data = {"n": len(args.x), "s_n": _frac(value)}
    elif None not in (args.n, args.h, args.k):
        value = s_n_closed_zz(args.n, args.h, args.k)
        data = {"n": args.n, "h": args.h, "k": args.k, "s_n": _frac(value)}
    else:
        raise UsageError("sn needs either --x and --y, or --n, --h and --k")
    _emit(data, args.format)
    return EXIT_OK


def _cmd_cn(args):
    res = c_n(args.n, exhaustive=True if args.exhaustive else None)
    data = res.to_json()
    row = {"n": data["n"], "c_n": data["c_n"], "ratio": data["ratio"],
           "argmin_h": data["argmin"][0], "argmin_k": data["argmin"][1]}
    _emit(data, args.format, [row])
    return EXIT_OK


def _cmd_generator(args):
    _emit({"generator": generator_criterion(args.a, args.group)}, args.format)
    return EXIT_OK


def _cmd_laguerre(args):
    p = laguerre_poly(args.n)
    coeffs = [str(c) for c in p.coeffs]
    if not args.conditions:
        if args.format == "csv":
            sys.stdout.write(_csv([{"degree": j, "coefficient": c} for j, c in enumerate(coeffs)]))
        else:
            sys.stdout.write(json.dumps(coeffs) + "\n")
        return EXIT_OK
    cond = an_necessary_conditions(p).to_json()
    _emit({"polynomial": coeffs, "conditions": cond}, args.format, [cond])
    return EXIT_OK


def _cmd_verify(args):
    reports = verify_suite(_poly_from(args), args.a, args.group, args.mode, args.bits, args.tol)
    if args.format == "csv":
        sys.stdout.write(reports_to_csv(reports))
    else:
        sys.stdout.write(json.dumps(reports_to_json(reports)) + "\n")
    failed = [r.name for r in reports if r.verdict is Verdict.FAIL]
    if failed:
        print(f"FAIL: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "roots":
            return _cmd_roots(args)
        if args.command == "mahler":
            return _cmd_mahler(args)
        if args.command in ("height-mult", "height-add"):
            return _cmd_height(args, args.command == "height-add")
        if args.command == "sn":
            return _cmd_sn(args)
        if args.command == "cn":
            return _cmd_cn(args)
        if args.command == "check-generator":
            return _cmd_generator(args)
        if args.command in ("laguerre", "families"):
            return _cmd_laguerre(args)
        if args.command == "verify":
            return _cmd_verify(args)
    except UsageError as exc:
        if not exc.reported:
            print(f"heightlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"heightlab: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PrecisionExhausted as exc:
        print(f"heightlab: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())
