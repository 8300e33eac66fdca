"""Elementary number theory: factoring, arithmetic functions, orders, Ramanujan sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

import numpy as np

from .errors import DomainError, OracleMismatch

MAX_N = 2**63 - 1
TRIAL_LIMIT = 10**6

# Deterministic for every n < 3.3 * 10**24, which covers 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

RAMANUJAN_TOL = 1e-6


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for prime, exp in self.factors:
            if prime <= last or exp < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            last = prime
            prod *= prime**exp
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for all 64-bit integers."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's variant; the increment c is walked deterministically.
    if n % 2 == 0:
        return 2
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"pollard rho failed on {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_rho(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Trial division up to 10**6, then Miller-Rabin and Pollard rho on the cofactor."""
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"factorize needs a positive integer, got {n!r}")
    if n > MAX_N:
        raise DomainError(f"{n} exceeds 2**63 - 1")
    found: dict[int, int] = {}
    m = n
    for p in (2, 3):
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    p = 5
    step = 2
    while p * p <= m and p <= TRIAL_LIMIT:
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
        p += step
        step = 6 - step
    if m > 1:
        if p * p > m:
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    fac = factorize(n)
    out = [1]
    for p, e in fac:
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def omega(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(n))


def multiplicative_order(a: int, m: int) -> int:
    """Least k >= 1 with a**k == 1 (mod m), found by stripping prime factors of phi(m)."""
    if m < 2:
        raise DomainError(f"modulus must be >= 2, got {m}")
    a %= m
    if math.gcd(a, m) != 1:
        raise DomainError(f"gcd({a}, {m}) != 1")
    k = euler_phi(m)
    for p, e in factorize(k):
        for _ in range(e):
            if pow(a, k // p, m) == 1:
                k //= p
            else:
                break
    return k


def is_primitive_root(g: int, p: int) -> bool:
    g %= p
    if g == 0:
        return False
    if p == 2:
        return g == 1
    return all(pow(g, (p - 1) // r, p) != 1 for r in factorize(p - 1).primes)


def primitive_root(p: int) -> int:
    """Smallest positive primitive root of the prime p."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        return 1
    rs = factorize(p - 1).primes
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in rs):
            return g
    raise AssertionError("unreachable")


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve).tolist()


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi (segmented sieve, Miller-Rabin past 10**14)."""
    lo = max(lo, 2)
    if hi < lo:
        return []
    root = math.isqrt(hi)
    if root > 10**7:
        return [n for n in range(lo, hi + 1) if is_prime(n)]
    seg = np.ones(hi - lo + 1, dtype=bool)
    for p in primes_up_to(root):
        start = max(p * p, -(-lo // p) * p)
        seg[start - lo :: p] = False
    return (np.flatnonzero(seg) + lo).tolist()


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a modulo the odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# --- Ramanujan sums -------------------------------------------------------


def ramanujan_sum(n: int, m: int) -> int:
    """c_n(m) via Hoelder's closed form mu(n/(n,m)) * phi(n) / phi(n/(n,m))."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    d = n // math.gcd(n, m)
    return moebius(d) * (euler_phi(n) // euler_phi(d))


def ramanujan_sum_divisor(n: int, m: int) -> int:
    """c_n(m) = sum over d | gcd(n, m) of d * mu(n/d)."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    g = math.gcd(n, m)
    return sum(d * moebius(n // d) for d in divisors(g))


def ramanujan_sum_complex(n: int, m: int) -> complex:
    """The defining sum of primitive n-th roots of unity raised to m, in floating point."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    t = np.arange(1, n + 1, dtype=np.int64)
    t = t[np.gcd(t, n) == 1]
    angles = 2 * np.pi * ((m % n) * t % n) / n
    return complex(np.exp(1j * angles).sum())


def ramanujan_sum_oracle(n: int, m: int) -> int:
    """Evaluate c_n(m) numerically and by the divisor identity; raise if they disagree."""
    z = ramanujan_sum_complex(n, m)
    nearest = round(z.real)
    if abs(z.imag) >= RAMANUJAN_TOL or abs(z.real - nearest) >= RAMANUJAN_TOL:
        raise OracleMismatch(f"c_{n}({m}) = {z} is not within {RAMANUJAN_TOL} of an integer")
    other = ramanujan_sum_divisor(n, m)
    if other != nearest:
        raise OracleMismatch(f"c_{n}({m}): complex sum {nearest} != divisor sum {other}")
    return nearest


# --- Counting pairs on parallel lines -------------------------------------


def _check_s_prime_args(ell: int, d: int, t: int) -> None:
    if ell < 3:
        raise DomainError(f"ell must be >= 3, got {ell}")
    if d < 1 or ell % d:
        raise DomainError(f"{d} does not divide {ell}")
    if not 1 <= t <= ell // d or math.gcd(t, ell // d) != 1:
        raise DomainError(f"t={t} must satisfy 1 <= t <= {ell // d} and gcd(t, {ell // d}) = 1")


def count_s_prime(ell: int, d: int, t: int) -> int:
    """Number of (j, k) in {1..ell-1}^2 with 2j + k = t*d (mod ell) and j + k != ell."""
    _check_s_prime_args(ell, d, t)
    target = t * d % ell
    return sum(
        1
        for j, k in product(range(1, ell), repeat=2)
        if (2 * j + k) % ell == target and j + k != ell
    )


def s_prime_closed_form(ell: int, d: int, t: int) -> int:
    """|I| - 2 + 2*floor(d/ell) - (-1)**d * lam, lam = 1 for even ell, 0 for odd."""
    _check_s_prime_args(ell, d, t)
    lam = 1 if ell % 2 == 0 else 0
    sign = -1 if d % 2 else 1
    return (ell - 1) - 2 + 2 * (d // ell) - sign * lam


def line_partition(n: int, a: int, b: int) -> dict[tuple[int, int], set[tuple[int, int]]]:
    """Split {1..n-1}^2 into the classes a*x + b*y = t*d (mod n), keyed by (d, t)."""
    classes: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for d in divisors(n):
        for t in range(1, n // d + 1):
            if math.gcd(t, n // d) == 1:
                classes[(d, t)] = set()
    for x, y in product(range(1, n), repeat=2):
        v = (a * x + b * y) % n
        for (d, t), members in classes.items():
            if t * d % n == v:
                members.add((x, y))
    return classes
