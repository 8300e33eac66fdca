"""Prime-range verification of diagonal solvability for the index of <-1, 2>.

For an odd prime p let l0 = [F_p^x : <-1, 2>].  When l0 >= 3 we look for a
generator g and x, y != 0 with g^2 x^l0 + g y^l0 + 1 = 0 (mod p).
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import nt
from .diagonal import find_witness_prime, solvability_bound
from .errors import DomainError
from .field import h_order

HOLDS = "holds"
VACUOUS = "vacuous"
COVERED = "covered_by_bound"
FAILED = "failed"

SEARCH_LIMIT = 10**6  # above this, primes covered by the bound are not searched
CSV_COLUMNS = ("p", "ell0", "verdict", "g", "x", "y", "ms")


@dataclass(frozen=True)
class ScanRecord:
    p: int
    ell0: int
    verdict: str
    g: int | None = None
    x: int | None = None
    y: int | None = None
    ms: float = 0.0

    def witness_ok(self) -> bool:
        if self.verdict != HOLDS:
            return False
        p, g, x, y = self.p, self.g, self.x, self.y
        return (
            nt.is_primitive_root(g, p)
            and x * y % p != 0
            and (g * g * pow(x, self.ell0, p) + g * pow(y, self.ell0, p) + 1) % p == 0
        )

    def row(self, timing: bool = True) -> list:
        blank = lambda v: "" if v is None else v  # noqa: E731
        return [self.p, self.ell0, self.verdict, blank(self.g), blank(self.x), blank(self.y),
                f"{self.ms:.3f}" if timing else ""]


def index_of_H(p: int) -> int:
    """[F_p^x : <-1, 2>] for an odd prime p."""
    if p < 3 or not nt.is_prime(p):
        raise DomainError(f"need an odd prime, got {p}")
    return (p - 1) // h_order(p)


def verify_conjecture(p: int) -> ScanRecord:
    start = time.perf_counter()
    ell0 = index_of_H(p)

    def done(verdict, g=None, x=None, y=None):
        return ScanRecord(p, ell0, verdict, g, x, y, (time.perf_counter() - start) * 1000)

    if ell0 < 3:
        return done(VACUOUS)
    if p > SEARCH_LIMIT and p >= solvability_bound(ell0):
        return done(COVERED)
    found = find_witness_prime(p, ell0, require_nonzero_xy=True)
    if found is None:
        return done(FAILED)
    return done(HOLDS, *found)


def _scan_block(primes: list[int]) -> list[ScanRecord]:
    return [verify_conjecture(p) for p in primes]


def scan_range(lo: int, hi: int, ell_filter: int | None = None, jobs: int = 1,
               block: int = 2000) -> list[ScanRecord]:
    """One record per odd prime lo <= p <= hi (with l0 == ell_filter if given), ascending."""
    if jobs < 1:
        raise DomainError(f"jobs must be >= 1, got {jobs}")
    if hi > nt.MAX_N + 1:
        raise DomainError("hi exceeds 2**63")
    primes = nt.primes_between(max(lo, 3), hi)
    if ell_filter is not None:
        primes = [p for p in primes if index_of_H(p) == ell_filter]
    blocks = [primes[i : i + block] for i in range(0, len(primes), block)]
    if jobs == 1 or len(blocks) <= 1:
        return [r for b in blocks for r in _scan_block(b)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return [r for part in pool.map(_scan_block, blocks) for r in part]


def write_csv(records: list[ScanRecord], stream, timing: bool = True) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row(timing))


def records_to_csv(records: list[ScanRecord], timing: bool = True) -> str:
    buf = io.StringIO()
    write_csv(records, buf, timing)
    return buf.getvalue()


# --- primes with a prescribed index ----------------------------------------


@dataclass
class PEllSet:
    ell: int
    bound: int
    lo: int
    primes: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"ell": self.ell, "bound": self.bound, "lo": self.lo, "primes": self.primes}


def has_index(p: int, ell: int) -> bool:
    """[F_p^x : <-1, 2>] == ell, using only modular powers.

    <-1, 2> lies in the subgroup of order m = (p-1)/ell iff 2^m = 1 and m is even;
    the index is exactly ell when that holds for m but fails for every m/r, r | m prime.
    """
    if (p - 1) % ell:
        return False
    m = (p - 1) // ell

    def inside(k: int) -> bool:
        return k % 2 == 0 and pow(2, k, p) == 1

    return inside(m) and not any(inside(m // r) for r in nt.factorize(m).primes)


def p_ell_set(ell: int, lo: int = 2) -> PEllSet:
    """Primes lo < p < b(ell) whose index of <-1, 2> is exactly ell."""
    if ell < 3:
        raise DomainError(f"ell must be >= 3, got {ell}")
    b = solvability_bound(ell)
    out = []
    step = 2 * ell  # |<-1, 2>| is even, so 2 ell | p - 1
    p = (lo // step) * step + 1
    while p <= lo:
        p += step
    while p < b:
        # cheap filter first: 2 must be an ell-th power
        if pow(2, (p - 1) // ell, p) == 1 and nt.is_prime(p) and has_index(p, ell):
            out.append(p)
        p += step
    return PEllSet(ell, b, lo, out)


# --- Fibonacci primitive roots ---------------------------------------------


def fibonacci_primitive_roots(p: int) -> list[int]:
    """Primitive roots g mod p with g^2 = g + 1, ascending."""
    if p < 3 or not nt.is_prime(p):
        raise DomainError(f"need an odd prime, got {p}")
    s = nt.sqrt_mod(5, p)
    if s is None:
        return []
    half = (p + 1) // 2
    roots = {(1 + s) * half % p, (1 - s) * half % p}
    return sorted(g for g in roots if nt.is_primitive_root(g, p))


def fib_prime_sequence(limit: int) -> list[int]:
    return [p for p in nt.primes_between(3, limit) if fibonacci_primitive_roots(p)]


def witness_from_fibonacci(p: int, g: int) -> tuple[int, int, int]:
    """A solution (g, x, y) with xy != 0 for exponent l0, built from a Fibonacci root g.

    g^2 = g + 1 gives g^2 (-1) + g (1) + 1 = 0.  Since -1 and 1 lie in <-1, 2>,
    which is the group of l0-th powers, we can pick x, y with x^l0 = -1, y^l0 = 1.
    """
    ell0 = index_of_H(p)
    if (g * g - g - 1) % p or not nt.is_primitive_root(g, p):
        raise DomainError(f"{g} is not a Fibonacci primitive root mod {p}")
    # -1 = g^((p-1)/2) and (p-1)/2 is divisible by l0 because |H| is even
    e = (p - 1) // 2
    if e % ell0:
        raise AssertionError("index does not divide (p-1)/2")
    return g, pow(g, e // ell0, p), 1
