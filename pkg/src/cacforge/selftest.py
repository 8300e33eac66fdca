"""Embedded reference tables and the self-test harness.

Witness rows are (q, g, x, y).  Entries are either field elements in the
``c0+c1*a`` syntax (ints mean residues mod p) or a pair (c, e) meaning c * g^e.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .cac import build_optimal_cac, derive_triples, verify_cac
from .diagonal import find_solvable_generator, solvability_bound
from .field import make_field, make_subgroup_H
from .scan import fib_prime_sequence, verify_conjecture

Entry = Union[int, str, tuple]

ELL4_WITNESSES: list[tuple[int, Entry, Entry, Entry]] = [
    (9, "1+a", (1, 1), (1, 1)),
    (13, 2, 4, 1),
    (17, 3, 6, 2),
    (25, "1+2a", 1, (1, 2)),
    (29, 2, 4, 4),
    (37, 5, 2, 2),
    (41, 6, 3, 3),
    (49, "4+a", 2, (2, 7)),
]

ELL5_WITNESSES: list[tuple[int, Entry, Entry, Entry]] = [
    (11, 7, 10, 10),
    (16, "a", (1, 2), (1, 2)),
    (31, 3, -3, 3),
]

ELL6_WITNESSES: list[tuple[int, Entry, Entry, Entry]] = [
    (19, 2, 1, 2),
    (25, "3+a", (1, 3), (1, 1)),
    (31, 3, 19, 27),
    (37, 2, 2, 1),
    (43, 3, 1, 28),
    (49, "4+a", (1, 3), (1, 3)),
    (61, 2, 24, 4),
    (67, 2, 4, 43),
    (73, 5, 1, 59),
    (79, 3, 6, 6),
    (97, 5, 5, 29),
    (103, 5, 5, 32),
    (109, 6, 16, 26),
    (121, "2+a", (1, 7), (1, 4)),
    (127, 3, 84, 3),
    (139, 2, 2, 103),
    (151, 6, 1, 132),
    (157, 5, 22, 82),
    (163, 2, 8, 1),
    (169, "7+2a", 1, (1, 2)),
    (181, 2, 86, 148),
    (193, 5, 1, 127),
]

UNSOLVABLE = [(13, 6), (23, 11)]
BOUND_VALUES = {5: 34, 6: 194, 11: 322}
FIB_PREFIX = [5, 11, 19, 31, 41, 59, 61, 71, 79, 109]


def resolve_entry(field, value: Entry, g):
    if isinstance(value, tuple):
        c, e = value
        return field(c) * g**e
    return field(value)


def check_witness_row(q: int, ell: int, g: Entry, x: Entry, y: Entry) -> tuple[bool, str]:
    F = make_field(q)
    g = F(g)
    x, y = resolve_entry(F, x, g), resolve_entry(F, y, g)
    residual = g * g * x**ell + g * y**ell + 1
    if not g.is_generator():
        return False, f"{g} is not a generator"
    if residual:
        return False, f"g^2 x^{ell} + g y^{ell} + 1 = {residual}"
    return True, f"g={g} x={x} y={y}"


@dataclass(frozen=True)
class Check:
    name: str
    run: Callable[[], tuple[bool, str]]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}" + ("" if self.ok else f": {self.detail}")


def _row_checks(ell: int, rows) -> list[Check]:
    return [
        Check(f"witness ell={ell} q={q}", lambda q=q, g=g, x=x, y=y: check_witness_row(q, ell, g, x, y))
        for q, g, x, y in rows
    ]


def _unsolvable(q: int, ell: int) -> tuple[bool, str]:
    w = find_solvable_generator(make_field(q), ell)
    return w is None, "no generator admits a point" if w is None else f"found g={w.g}"


def _bound(ell: int, expected: int) -> tuple[bool, str]:
    b = solvability_bound(ell)
    return b == expected, f"b({ell}) = {b}"


def _p31_size() -> tuple[bool, str]:
    code, _ = build_optimal_cac(31)
    return code.size == 7 and verify_cac(code).valid, f"size {code.size}"


def _p31_triple() -> tuple[bool, str]:
    # 2 + 3 - 5 = 0 with the three terms in distinct cosets of <-1, 2> mod 31
    sub = make_subgroup_H(31)
    cosets = {sub.coset_of(v % 31) for v in (2, 3, -5)}
    return len(cosets) == 3, f"cosets {sorted(cosets)}"


def _p31_witness() -> tuple[bool, str]:
    r = verify_conjecture(31)
    if r.verdict != "holds":
        return False, r.verdict
    tw = derive_triples(31, r.g, r.x, r.y)
    return len(tw.triples) == 1, f"triple {tw.triples[0]}"


def _fib_prefix() -> tuple[bool, str]:
    got = fib_prime_sequence(109)
    return got == FIB_PREFIX, f"{got}"


def _p127() -> tuple[bool, str]:
    ok, detail = check_witness_row(127, 9, 7, 3, 73)
    return ok and verify_conjecture(127).verdict == "holds", detail


def default_checks() -> list[Check]:
    checks = _row_checks(4, ELL4_WITNESSES) + _row_checks(5, ELL5_WITNESSES) + _row_checks(6, ELL6_WITNESSES)
    checks += [Check(f"unsolvable q={q} ell={ell}", lambda q=q, ell=ell: _unsolvable(q, ell)) for q, ell in UNSOLVABLE]
    checks += [Check(f"bound b({ell})={b}", lambda ell=ell, b=b: _bound(ell, b)) for ell, b in BOUND_VALUES.items()]
    checks += [
        Check("cac p=31 size 7", _p31_size),
        Check("cac p=31 triple (2,3,-5)", _p31_triple),
        Check("cac p=31 witness triple", _p31_witness),
        Check("fibonacci prefix to 109", _fib_prefix),
        Check("p=127 ell0=9 witness", _p127),
    ]
    return checks


def run_checks(checks: list[Check] | None = None) -> list[CheckResult]:
    out = []
    for c in checks if checks is not None else default_checks():
        try:
            ok, detail = c.run()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(c.name, ok, detail))
    return out
