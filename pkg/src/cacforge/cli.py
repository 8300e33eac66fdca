"""Command-line entry point: ``cacforge <subcommand> ...``.

Exit codes: 0 success, 1 domain error, 2 verification failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from dataclasses import dataclass

from . import nt
from .cac import build_optimal_cac, export_cac, import_cac, verify_cac
from .charsums import count_via_charsum
from .diagonal import bound_sheet, cac_size_sheet, count_affine, solve
from .errors import ConstructionError, DomainError, OracleMismatch
from .field import make_field
from .scan import fib_prime_sequence, p_ell_set, scan_range, write_csv, FAILED
from .selftest import default_checks, run_checks

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_USAGE = 64
FORMATS = ("json", "csv", "table")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class Config:
    jobs: int = 1
    fmt: str = "json"
    count_tol: float = 1e-3

    def __post_init__(self):
        if self.jobs < 1:
            raise DomainError(f"jobs must be >= 1, got {self.jobs}")
        if not 0 < self.count_tol < 0.5:
            raise DomainError(f"tolerance must lie in (0, 0.5), got {self.count_tol}")
        if self.fmt not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}")


def _env_jobs() -> int:
    raw = os.environ.get("CACFORGE_JOBS", "1")
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"CACFORGE_JOBS={raw!r} is not an integer") from None


def _modulus(text: str | None):
    if text is None:
        return None
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise DomainError(f"modulus must be comma-separated coefficients, constant first: {text!r}") from None


def _field(args):
    return make_field(args.q, _modulus(args.modulus))


def _emit(obj, cfg: Config, out) -> None:
    if cfg.fmt == "table" and isinstance(obj, dict):
        for k, v in obj.items():
            out.write(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}\n")
    elif cfg.fmt == "csv" and isinstance(obj, dict):
        w = csv.writer(out, lineterminator="\n")
        w.writerow(obj.keys())
        w.writerow([json.dumps(v) if isinstance(v, (dict, list)) else v for v in obj.values()])
    else:
        out.write(json.dumps(obj) + "\n")


# --- subcommands ------------------------------------------------------------


def cmd_solve(args, cfg, out):
    F = _field(args)
    _emit(solve(F, args.ell, args.require_nonzero_xy).to_json(), cfg, out)
    return EXIT_OK


def cmd_count(args, cfg, out):
    F = _field(args)
    g = F(args.g) if args.g is not None else F.g0
    if not g.is_generator():
        raise DomainError(f"{g} is not a generator of F_{F.q}^x")
    doc = {"q": F.q, "ell": args.ell, "g": str(g), "method": args.method}
    status = EXIT_OK
    if args.method in ("brute", "both"):
        doc["N_brute"] = count_affine(F, args.ell, g)
    if args.method in ("charsum", "both"):
        doc["N_charsum"] = count_via_charsum(F, args.ell, g, cfg.count_tol)
    if args.method == "both" and doc["N_brute"] != doc["N_charsum"]:
        status = EXIT_VERIFY
        sys.stderr.write(f"error: brute count {doc['N_brute']} != character sum {doc['N_charsum']}\n")
    doc["N"] = doc.get("N_brute", doc.get("N_charsum"))
    _emit(doc, cfg, out)
    return status


_G_POWER = re.compile(r"^\s*(?:([+-]?\d+)\s*\*\s*)?g(?:\s*\^\s*(\d+))?\s*$")


def _relative_to(F, g, text: str):
    """Parse an element, also accepting c*g^e written in terms of the chosen generator."""
    m = _G_POWER.match(text)
    if m is None:
        return F(text)
    c, e = m.groups()
    return F(int(c) if c else 1) * g ** (int(e) if e else 1)


def cmd_check(args, cfg, out):
    F = _field(args)
    g = F(args.g)
    x, y = _relative_to(F, g, args.x), _relative_to(F, g, args.y)
    residual = g * g * x**args.ell + g * y**args.ell + 1
    doc = {"q": F.q, "ell": args.ell, "g": str(g), "x": str(x), "y": str(y),
           "residual": str(residual), "g_is_generator": g.is_generator()}
    _emit(doc, cfg, out)
    if residual or not doc["g_is_generator"]:
        sys.stderr.write("error: not a witness\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_bound(args, cfg, out):
    _emit(bound_sheet(args.ell).to_json(), cfg, out)
    return EXIT_OK


def cmd_sizes(args, cfg, out):
    _emit(cac_size_sheet(args.p).to_json(), cfg, out)
    return EXIT_OK


def cmd_ramanujan(args, cfg, out):
    value = nt.ramanujan_sum_oracle(args.n, args.m) if args.oracle else nt.ramanujan_sum(args.n, args.m)
    _emit({"n": args.n, "m": args.m, "value": value}, cfg, out)
    return EXIT_OK


def cmd_cac_build(args, cfg, out):
    code, _ = build_optimal_cac(args.p)
    text = json.dumps(export_cac(code)) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def cmd_cac_verify(args, cfg, out):
    try:
        with open(args.file) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read {args.file}: {exc}") from None
    try:
        code = import_cac(doc)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed code file: {exc!r}") from None
    verdict = verify_cac(code)
    _emit(verdict.to_json(), cfg, out)
    if not verdict.valid:
        c = verdict.conflict
        sys.stderr.write(f"error: codewords {list(c.first.elements)} and {list(c.second.elements)} share difference {c.residue}\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_scan(args, cfg, out):
    if not 2 < args.lo <= args.hi:
        raise DomainError(f"need 2 < lo <= hi, got lo={args.lo} hi={args.hi}")
    records = scan_range(args.lo, args.hi, args.ell, jobs=cfg.jobs)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(records, fh, timing=not args.no_timing)
    else:
        write_csv(records, out, timing=not args.no_timing)
    failed = [r.p for r in records if r.verdict == FAILED]
    if failed:
        sys.stderr.write(f"error: no witness for primes {failed}\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_fib_roots(args, cfg, out):
    for p in fib_prime_sequence(args.limit):
        out.write(f"{p}\n")
    return EXIT_OK


def cmd_pell(args, cfg, out):
    _emit(p_ell_set(args.ell, args.lo).to_json(), cfg, out)
    return EXIT_OK


def cmd_selftest(args, cfg, out):
    checks = default_checks()
    if args.list:
        for c in checks:
            out.write(f"{c.name}\n")
        return EXIT_OK
    results = run_checks(checks)
    for r in results:
        out.write(r.line() + "\n")
    failed = sum(not r.ok for r in results)
    out.write(f"{len(results) - failed}/{len(results)} passed\n")
    return EXIT_VERIFY if failed else EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cacforge", description="Diagonal equations over finite fields and weight-3 conflict-avoiding codes.")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $CACFORGE_JOBS or 1)")
    p.add_argument("--format", choices=FORMATS, default="json", dest="fmt")
    p.add_argument("--tol", type=float, default=1e-3, help="rounding tolerance for character-sum counts")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def field_args(sp):
        sp.add_argument("--q", type=int, required=True, help="field size, a prime power")
        sp.add_argument("--modulus", help="irreducible modulus coefficients, constant first, e.g. 1,0,1")

    s = sub.add_parser("solve", help="find a generator g whose curve has a point")
    field_args(s)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--require-nonzero-xy", action="store_true", help="only accept solutions with x*y != 0")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("count", help="count affine solutions for one generator")
    field_args(s)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--g", help="generator (default: the field's fixed generator)")
    s.add_argument("--method", choices=("brute", "charsum", "both"), default="both")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("check", help="substitute (g, x, y) into the equation")
    field_args(s)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--g", required=True)
    s.add_argument("--x", required=True, help="element, or c*g^e relative to --g")
    s.add_argument("--y", required=True, help="element, or c*g^e relative to --g")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("bound", help="solvability bound and related thresholds for ell")
    s.add_argument("--ell", type=int, required=True)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("sizes", help="CAC size bounds for a prime length")
    s.add_argument("--p", type=int, required=True)
    s.set_defaults(func=cmd_sizes)

    s = sub.add_parser("ramanujan", help="Ramanujan sum c_n(m)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--oracle", action="store_true", help="cross-check against the divisor and complex sums")
    s.set_defaults(func=cmd_ramanujan)

    cac = sub.add_parser("cac", help="build or verify conflict-avoiding codes")
    cac_sub = cac.add_subparsers(dest="cac_command", parser_class=_Parser)
    s = cac_sub.add_parser("build")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_cac_build)
    s = cac_sub.add_parser("verify")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_cac_verify)

    s = sub.add_parser("scan", help="verify solvability for every prime in a range")
    s.add_argument("--lo", type=int, required=True)
    s.add_argument("--hi", type=int, required=True)
    s.add_argument("--ell", type=int, help="only primes with this index of <-1, 2>")
    s.add_argument("--out", help="CSV file (default: stdout)")
    s.add_argument("--no-timing", action="store_true", help="leave the ms column empty for reproducible output")
    s.add_argument("--jobs", type=int, default=None, dest="sub_jobs")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("fib-roots", help="primes with a Fibonacci primitive root")
    s.add_argument("--limit", type=int, required=True)
    s.set_defaults(func=cmd_fib_roots)

    s = sub.add_parser("pell", help="primes below b(ell) whose index of <-1, 2> is ell")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--lo", type=int, default=2)
    s.set_defaults(func=cmd_pell)

    s = sub.add_parser("selftest", help="run the embedded reference tables")
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    if getattr(args, "func", None) is None:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write("error: missing subcommand\n")
        return EXIT_USAGE
    try:
        jobs = getattr(args, "sub_jobs", None) or args.jobs or _env_jobs()
        cfg = Config(jobs=jobs, fmt=args.fmt, count_tol=args.tol)
        return args.func(args, cfg, out)
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except (OracleMismatch, ConstructionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
