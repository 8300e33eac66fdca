"""Finite fields F_q with full power and discrete-log tables.

Elements are encoded as integer codes ``c0 + c1*p + c2*p**2 + ...`` where
``c0 + c1*a + c2*a^2 + ...`` is the polynomial representative modulo the
defining polynomial.  For a prime field the code is the residue itself.
Multiplication goes through the log tables; addition is digit-wise mod p.
All helpers accept Python ints or numpy integer arrays of codes.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from . import nt
from .errors import DomainError, ReducibleModulusError

# Presentations used for the small quadratic extensions and F_16 in the
# witness tables: F_9 = F_3(i), F_25 = F_5(sqrt 2), F_49 = F_7(i),
# F_121 = F_11(sqrt 2), F_169 = F_13(sqrt 2), F_16 = F_2[x]/(x^4 + x + 1).
# Coefficients are listed constant term first, leading 1 included.
NAMED_MODULI: dict[int, tuple[int, ...]] = {
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (3, 0, 1),
    49: (1, 0, 1),
    121: (9, 0, 1),
    169: (11, 0, 1),
}


# --- polynomials over F_p (coefficient lists, constant term first) ----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quot[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return quot, a


def poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return poly_divmod(prod, f, p)[1]


def poly_powmod(a: Sequence[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = poly_divmod(a, f, p)[1]
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _monic_polys(p: int, degree: int) -> Iterator[list[int]]:
    # Ascending with the coefficient of x^(degree-1) most significant.
    for lower in product(range(p), repeat=degree):
        yield list(reversed(lower)) + [1]


def find_factor(f: Sequence[int], p: int) -> list[int] | None:
    """A monic factor of f with 1 <= degree <= deg(f)/2, or None if f is irreducible."""
    f = _trim([c % p for c in f])
    k = len(f) - 1
    for r in range(p):
        if sum(c * pow(r, i, p) for i, c in enumerate(f)) % p == 0:
            return [(-r) % p, 1]
    for degree in range(2, k // 2 + 1):
        for cand in _monic_polys(p, degree):
            if not poly_divmod(f, cand, p)[1]:
                return cand
    return None


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (high coefficients compared first)."""
    for cand in _monic_polys(p, k):
        if find_factor(cand, p) is None:
            return tuple(cand)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def prime_power(q: int) -> tuple[int, int]:
    """(p, k) with q = p**k, or DomainError."""
    if q < 2:
        raise DomainError(f"{q} is not a prime power")
    fac = nt.factorize(q)
    if len(fac) != 1:
        raise DomainError(f"{q} is not a prime power")
    return fac.factors[0]


# --- the field context ----------------------------------------------------


class FieldCtx:
    """F_q = F_p[a]/(modulus) with a fixed generator and complete log tables.

    ``pw[e]`` is the code of ``generator**e`` for 0 <= e < q-1 and
    ``dlog[c]`` is the exponent of the element with code c (``dlog[0] == -1``).
    """

    def __init__(self, p: int, modulus: Sequence[int] = (0, 1), generator: int | str | None = None):
        if not nt.is_prime(p):
            raise DomainError(f"{p} is not prime")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) < 2 or modulus[-1] != 1:
            raise DomainError(f"modulus {list(modulus)} must be monic of degree >= 1")
        self.p = p
        self.k = len(modulus) - 1
        self.q = p**self.k
        if self.k == 1:
            modulus = (0, 1)
        elif (factor := find_factor(modulus, p)) is not None:
            raise ReducibleModulusError(modulus, factor)
        self.modulus = modulus
        self._place = np.array([p**i for i in range(self.k)], dtype=np.int64)
        if isinstance(generator, str):
            generator = self.parse(generator)
        if generator is None:
            generator = self._smallest_generator()
        elif not self._is_generator_direct(generator):
            raise DomainError(f"{self.format(generator)} does not generate F_{self.q}^x")
        self.generator = int(generator)
        self.pw, self.dlog = self._build_tables()

    # direct polynomial arithmetic, used only to build and cross-check tables
    def _poly(self, code: int) -> list[int]:
        return [(code // pl) % self.p for pl in self._place.tolist()]

    def _code(self, coeffs: Sequence[int]) -> int:
        coeffs = list(coeffs) + [0] * (self.k - len(coeffs))
        return sum(int(c) % self.p * int(pl) for c, pl in zip(coeffs, self._place))

    def mul_direct(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        return self._code(poly_mulmod(self._poly(a), self._poly(b), self.modulus, self.p))

    def pow_direct(self, a: int, e: int) -> int:
        if self.k == 1:
            return pow(a, e, self.p)
        return self._code(poly_powmod(self._poly(a), e, self.modulus, self.p))

    def _is_generator_direct(self, c: int) -> bool:
        if not 0 < c < self.q:
            return False
        if self.q == 2:
            return c == 1
        return all(self.pow_direct(c, (self.q - 1) // r) != 1 for r in nt.factorize(self.q - 1).primes)

    def _smallest_generator(self) -> int:
        if self.k == 1:
            return nt.primitive_root(self.p)
        return next(c for c in range(2, self.q) if self._is_generator_direct(c))

    def _mul_matrix(self, c: int) -> np.ndarray:
        # column i holds the digits of c * a^i
        cols = [self._poly(self.mul_direct(c, int(self._place[i]))) for i in range(self.k)]
        return np.array(cols, dtype=np.int64).T

    def _build_tables(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.q - 1
        block = max(1, math.isqrt(n))
        small = np.empty((block, self.k), dtype=np.int64)
        cur = 1
        for j in range(block):
            small[j] = self._poly(cur)
            cur = self.mul_direct(cur, self.generator)
        step = self._mul_matrix(cur)  # multiplication by generator**block
        rows = -(-n // block)
        mats = np.empty((rows, self.k, self.k), dtype=np.int64)
        mats[0] = np.eye(self.k, dtype=np.int64)
        for i in range(1, rows):
            mats[i] = (step @ mats[i - 1]) % self.p
        digits = np.einsum("rij,bj->rbi", mats, small) % self.p
        pw = (digits.reshape(-1, self.k) @ self._place)[:n]
        dlog = np.full(self.q, -1, dtype=np.int64)
        dlog[pw] = np.arange(n, dtype=np.int64)
        if np.count_nonzero(dlog >= 0) != n or dlog[0] != -1:
            raise AssertionError(f"generator table for F_{self.q} is not a bijection")
        pw.setflags(write=False)
        dlog.setflags(write=False)
        return pw, dlog

    # --- vectorised code arithmetic ------------------------------------------

    @property
    def order(self) -> int:
        """Order q - 1 of the multiplicative group."""
        return self.q - 1

    def digits(self, c):
        return (np.asarray(c, dtype=np.int64)[..., None] // self._place) % self.p

    def _compose(self, d):
        return d @ self._place

    @staticmethod
    def _out(x, *inputs):
        return int(x) if all(np.ndim(a) == 0 for a in inputs) else x

    def add(self, a, b):
        if self.k == 1:
            r = (np.asarray(a, dtype=np.int64) + b) % self.p
        else:
            r = self._compose((self.digits(a) + self.digits(b)) % self.p)
        return self._out(r, a, b)

    def neg(self, a):
        if self.k == 1:
            r = (-np.asarray(a, dtype=np.int64)) % self.p
        else:
            r = self._compose((-self.digits(a)) % self.p)
        return self._out(r, a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a_arr = np.asarray(a, dtype=np.int64)
        b_arr = np.asarray(b, dtype=np.int64)
        zero = (a_arr == 0) | (b_arr == 0)
        e = (self.dlog[a_arr] + self.dlog[b_arr]) % self.order
        r = np.where(zero, 0, self.pw[e])
        return self._out(r, a, b)

    def power(self, a, e: int):
        a_arr = np.asarray(a, dtype=np.int64)
        r = self.pw[(self.dlog[a_arr] * e) % self.order]
        if e == 0:
            r = np.ones_like(a_arr)
        elif e < 0 and np.any(a_arr == 0):
            raise ZeroDivisionError("0 has no inverse")
        else:
            r = np.where(a_arr == 0, 0, r)
        return self._out(r, a)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("0 has no inverse")
        return self.power(a, -1)

    def gen_pow(self, e):
        """Code of generator**e for integer or array exponents."""
        r = self.pw[np.asarray(e, dtype=np.int64) % self.order]
        return self._out(r, e)

    @property
    def minus_one(self) -> int:
        return self.p - 1

    # --- elements and I/O ----------------------------------------------------

    def __call__(self, value) -> FieldElem:
        return self.elem(value)

    def elem(self, value) -> FieldElem:
        """Coerce an int (prime-subfield residue), code string, or FieldElem."""
        if isinstance(value, FieldElem):
            if value.field is not self:
                raise DomainError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return FieldElem(self, self.parse(value))
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, int(value) % self.p)
        raise TypeError(f"cannot make a field element from {value!r}")

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    @property
    def g0(self) -> FieldElem:
        return FieldElem(self, self.generator)

    def format(self, code: int) -> str:
        if self.k == 1:
            return str(int(code))
        terms = []
        for i, c in enumerate(self._poly(int(code))):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "a" if i == 1 else f"a^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    _TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?(a(?:\s*\^\s*(\d+))?)?$")

    def parse(self, text: str) -> int:
        """Parse ``c0+c1*a+c2*a^2`` (signs, ``2a`` and bare ``a`` accepted) into a code."""
        src = text.replace(" ", "")
        pieces = re.findall(r"([+-]?)([^+-]+)", src)
        if not src or "".join(s + b for s, b in pieces) != src:
            raise DomainError(f"cannot parse element {text!r}")
        coeffs = [0] * self.k
        for sign, body in pieces:
            m = self._TERM.match(body)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise DomainError(f"cannot parse element {text!r}")
            coef = int(m.group(1)) if m.group(1) is not None else 1
            if sign == "-":
                coef = -coef
            if m.group(2) is None:
                coeffs[0] += coef
                continue
            if self.k == 1:
                raise DomainError(f"prime field F_{self.p} has no adjoined root: {text!r}")
            power = int(m.group(3)) if m.group(3) is not None else 1
            if power < self.k:
                coeffs[power] += coef
            else:
                for i, c in enumerate(self._poly(self.pow_direct(self._code([0, 1]), power))):
                    coeffs[i] += coef * c
        return self._code(coeffs)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus), "generator": self.format(self.generator)}

    def __repr__(self) -> str:
        if self.k == 1:
            return f"FieldCtx(F_{self.p}, g0={self.generator})"
        return f"FieldCtx(F_{self.q}, modulus={list(self.modulus)}, g0={self.format(self.generator)})"


@dataclass(frozen=True, eq=False)
class FieldElem:
    """An element of a FieldCtx, wrapping its integer code."""

    field: FieldCtx
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.q:
            raise DomainError(f"code {self.code} out of range for F_{self.field.q}")

    @property
    def coeffs(self) -> list[int]:
        return self.field._poly(self.code)

    def _other(self, other) -> int:
        return self.field.elem(other).code

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.code == other.code
        if isinstance(other, (int, str)):
            return self.code == self._other(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.code))

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.code))

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._other(other), self.code))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.power(self.code, e))

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv(self.code))

    def __truediv__(self, other):
        return self * FieldElem(self.field, self._other(other)).inverse()

    def __bool__(self):
        return self.code != 0

    @property
    def log(self) -> int:
        """Exponent base the field generator; -1 for zero."""
        return int(self.field.dlog[self.code])

    def is_generator(self) -> bool:
        return self.code != 0 and math.gcd(self.log, self.field.order) == 1

    def __str__(self):
        return self.field.format(self.code)

    def __repr__(self):
        return f"FieldElem({self}, F_{self.field.q})"


# --- constructors ---------------------------------------------------------


@lru_cache(maxsize=64)
def make_prime_field(p: int) -> FieldCtx:
    if not isinstance(p, int) or not nt.is_prime(p):
        raise DomainError(f"{p} is not prime")
    return FieldCtx(p)


def make_extension_field(p: int, modulus: Sequence[int], generator: int | str | None = None) -> FieldCtx:
    """F_p[a]/(modulus) for a monic irreducible modulus (constant term first)."""
    return FieldCtx(p, tuple(modulus), generator)


@lru_cache(maxsize=256)
def make_field(q: int, modulus: tuple[int, ...] | None = None) -> FieldCtx:
    """F_q using the named presentation when there is one, else the smallest irreducible."""
    p, k = prime_power(q)
    if k == 1 and modulus is None:
        return make_prime_field(p)
    if modulus is None:
        modulus = NAMED_MODULI.get(q) or smallest_irreducible(p, k)
    if len(modulus) - 1 != k:
        raise DomainError(f"modulus degree {len(modulus) - 1} does not match q = {p}^{k}")
    return FieldCtx(p, modulus)


def field_from_json(doc: dict | str) -> FieldCtx:
    if isinstance(doc, str):
        doc = json.loads(doc)
    field = make_extension_field(doc["p"], doc["modulus"], doc.get("generator"))
    if field.k != doc["k"]:
        raise DomainError("k does not match modulus degree")
    return field


def generator_exponents(field: FieldCtx) -> list[int]:
    """Exponents 1 <= t <= q-1 coprime to q-1, ascending."""
    n = field.order
    return [t for t in range(1, n + 1) if math.gcd(t, n) == 1]


def generators(field: FieldCtx) -> Iterator[FieldElem]:
    """All generators g0**t of the multiplicative group, in increasing t."""
    for t in generator_exponents(field):
        yield FieldElem(field, field.gen_pow(t))


# --- subgroups ------------------------------------------------------------

ELL_POWERS = "ell_powers"
MINUS_ONE_AND_TWO = "minus_one_and_two"


@dataclass(frozen=True, eq=False)
class SubgroupCtx:
    """A subgroup of F_q^x of the given index; cosets are labelled by dlog mod index."""

    field: FieldCtx
    kind: str
    order: int
    index: int

    def __post_init__(self):
        if self.order * self.index != self.field.order:
            raise AssertionError("order * index != q - 1")

    def coset_of(self, a) -> int:
        code = self.field.elem(a).code if not isinstance(a, (int, np.integer)) else int(a)
        if not 0 <= code < self.field.q:
            raise DomainError(f"code {code} is outside F_{self.field.q}")
        if code == 0:
            raise DomainError("0 lies in no coset")
        return int(self.field.dlog[code]) % self.index

    def coset_codes(self, a):
        """Vectorised coset labels for an array of nonzero codes."""
        return self.field.dlog[np.asarray(a, dtype=np.int64)] % self.index

    def __contains__(self, a) -> bool:
        return self.coset_of(a) == 0

    def elements(self) -> list[int]:
        """Codes of the subgroup, ascending by exponent."""
        return self.field.pw[:: self.index].tolist()

    def label_relative(self, a, g) -> int:
        """Coset label of a when the cosets are numbered g^i * subgroup."""
        tg = self.coset_of(g)
        if math.gcd(tg, self.index) != 1:
            raise DomainError("g does not generate the quotient group")
        return self.coset_of(a) * pow(tg, -1, self.index) % self.index if self.index > 1 else 0


def make_subgroup_ell(field: FieldCtx, ell: int) -> SubgroupCtx:
    """The subgroup of ell-th powers (index ell)."""
    if ell < 1 or field.order % ell:
        raise DomainError(f"{ell} does not divide q - 1 = {field.order}")
    return SubgroupCtx(field, ELL_POWERS, field.order // ell, ell)


def h_order(p: int) -> int:
    """|<-1, 2>| in F_p^x for an odd prime p."""
    o = nt.multiplicative_order(2, p)
    return 2 * o if o % 2 else o


def make_subgroup_H(p: int) -> SubgroupCtx:
    """The subgroup generated by -1 and 2 in F_p^x."""
    if p == 2 or not nt.is_prime(p):
        raise DomainError(f"need an odd prime, got {p}")
    field = make_prime_field(p)
    order = h_order(p)
    sub = SubgroupCtx(field, MINUS_ONE_AND_TWO, order, field.order // order)
    # <-1, 2> sits inside the index-l0 power subgroup and has the same size
    if sub.coset_of(2) or sub.coset_of(p - 1):
        raise AssertionError(f"<-1, 2> is not the subgroup of {sub.index}-th powers mod {p}")
    return sub
