"""Multiplicative characters, Jacobi sums and character-sum point counts.

A character of order ell is fixed by chi(g0) = zeta_ell with zeta_ell = exp(2 pi i / ell),
so chi^j(a) = zeta_ell^(j * dlog(a)).  Exponents are reduced mod ell in integer
arithmetic before any complex number is formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import nt
from .diagonal import check_ell, count_affine
from .errors import DomainError, OracleMismatch
from .field import FieldCtx, FieldElem, generator_exponents

COUNT_TOL = 1e-3
IDENTITY_TOL = 1e-9


def roots_of_unity(ell: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(ell) / ell)


@dataclass(frozen=True, eq=False)
class Character:
    """chi^power for the order-ell character chi with chi(g0) = exp(2 pi i / ell)."""

    field: FieldCtx
    order: int
    power: int = 1

    def __post_init__(self):
        check_ell(self.field, self.order)
        object.__setattr__(self, "power", self.power % self.order)

    @property
    def trivial(self) -> bool:
        return self.power == 0

    def __mul__(self, other: Character) -> Character:
        if other.field is not self.field or other.order != self.order:
            raise DomainError("characters of different families")
        return Character(self.field, self.order, self.power + other.power)

    def __pow__(self, e: int) -> Character:
        return Character(self.field, self.order, self.power * e)

    def inverse(self) -> Character:
        return self ** -1

    def exponent(self, a) -> int:
        """Integer r with chi(a) = zeta^r, for nonzero a."""
        code = self.field.elem(a).code
        if code == 0:
            raise DomainError("0 has no character exponent")
        return self.power * int(self.field.dlog[code]) % self.order

    def __call__(self, a) -> complex:
        return char_eval(self, a)


def char_eval(chi: Character, a) -> complex:
    """chi(a), extended by chi(0) = 1 for the trivial character and 0 otherwise."""
    code = chi.field.elem(a).code
    if code == 0:
        return 1.0 + 0j if chi.trivial else 0j
    return complex(roots_of_unity(chi.order)[chi.exponent(a)])


def jacobi_sum(chi_j: Character, chi_k: Character) -> complex:
    """Sum over every a in F_q of chi_j(a) chi_k(1 - a), term by term."""
    if chi_j.field is not chi_k.field or chi_j.order != chi_k.order:
        raise DomainError("characters of different families")
    f = chi_j.field
    total = 0j
    for a in range(f.q):  # a runs over element codes
        total += char_eval(chi_j, FieldElem(f, a)) * char_eval(chi_k, FieldElem(f, f.sub(1, a)))
    return total


@lru_cache(maxsize=128)
def jacobi_matrix(field: FieldCtx, ell: int) -> np.ndarray:
    """J[j, k] = J(chi^j, chi^k) for 0 <= j, k < ell.

    Elements a outside {0, 1} are binned by (dlog a mod ell, dlog(1-a) mod ell);
    the sum is then a 2-D discrete Fourier transform of the bin counts.  The
    extended values at a = 0 and a = 1 add 1 to row 0 and to column 0.
    """
    check_ell(field, ell)
    a = np.arange(field.q, dtype=np.int64)
    b = field.sub(1, a)
    keep = (a != 0) & (b != 0)
    a, b = a[keep], b[keep]
    counts = np.zeros((ell, ell), dtype=np.float64)
    np.add.at(counts, (field.dlog[a] % ell, field.dlog[b] % ell), 1)
    J = np.fft.ifft2(counts) * (ell * ell)
    J[0, :] += 1
    J[:, 0] += 1
    J.setflags(write=False)
    return J


def _generator_exponent(field: FieldCtx, g) -> int:
    g = field.elem(g)
    if not g.is_generator():
        raise DomainError(f"{g} is not a generator of F_{field.q}^x")
    return g.log


def _nearest_count(value: complex, what: str, tol: float = COUNT_TOL) -> int:
    n = round(value.real)
    if abs(value - n) >= tol or n < 0:
        raise OracleMismatch(f"{what} = {value} is not within {tol} of a nonnegative integer")
    return n


def charsum_value(field: FieldCtx, ell: int, g) -> complex:
    """q + sum_{1<=j,k<ell} chi^j(-g^-2) chi^k(-g^-1) J(chi^j, chi^k), unrounded."""
    check_ell(field, ell, proper=True)
    t = _generator_exponent(field, g)
    if ell == 1:
        return complex(field.q)
    n = field.order
    m1 = int(field.dlog[field.minus_one])
    e1 = (m1 - 2 * t) % n % ell  # chi(-g^-2) = zeta^e1
    e2 = (m1 - t) % n % ell
    j = np.arange(1, ell)[:, None]
    k = np.arange(1, ell)[None, :]
    phase = roots_of_unity(ell)[(j * e1 + k * e2) % ell]
    return complex(field.q + (phase * jacobi_matrix(field, ell)[1:, 1:]).sum())


def count_via_charsum(field: FieldCtx, ell: int, g, tol: float = COUNT_TOL) -> int:
    return _nearest_count(charsum_value(field, ell, g), f"N_g for q={field.q}, ell={ell}", tol)


def reduced_charsum_value(field: FieldCtx, ell: int, t: int) -> complex:
    """q + 1 + sum over j + k != ell of chi(-1)^(j+k) chi(g0^-1)^((2j+k)t) J(chi^j, chi^k).

    Drops the j + k = ell terms, which sum to -1 once ell >= 3.
    """
    check_ell(field, ell, proper=True)
    if ell < 3:
        raise DomainError("the reduced sum needs ell >= 3")
    if math.gcd(t, ell) != 1:
        raise DomainError(f"t={t} is not coprime to ell={ell}")
    m1 = int(field.dlog[field.minus_one]) % ell
    j = np.arange(1, ell)[:, None]
    k = np.arange(1, ell)[None, :]
    expo = (m1 * (j + k) - (2 * j + k) * t) % ell
    terms = roots_of_unity(ell)[expo] * jacobi_matrix(field, ell)[1:, 1:]
    terms = np.where(j + k != ell, terms, 0)
    return complex(field.q + 1 + terms.sum())


def count_via_reduced_charsum(field: FieldCtx, ell: int, t: int) -> int:
    """N at the generator g0^t from the reduced sum; equals count_affine(g0^t)."""
    return _nearest_count(reduced_charsum_value(field, ell, t), f"N_(g0^{t})")


def generator_subsum_value(field: FieldCtx, ell: int) -> complex:
    """phi(ell)(q+1) + sum over j + k != ell of chi(-1)^(j+k) J(chi^j, chi^k) c_ell(2j + k).

    Equals the sum of N_(g0^t) over 1 <= t <= ell coprime to ell.
    """
    check_ell(field, ell, proper=True)
    if ell < 3:
        raise DomainError("needs ell >= 3")
    m1 = int(field.dlog[field.minus_one]) % ell
    total = nt.euler_phi(ell) * (field.q + 1)
    J = jacobi_matrix(field, ell)
    zeta = roots_of_unity(ell)
    for j in range(1, ell):
        for k in range(1, ell):
            if j + k != ell:
                total += zeta[m1 * (j + k) % ell] * J[j, k] * nt.ramanujan_sum(ell, 2 * j + k)
    return complex(total)


def aggregate_N(field: FieldCtx, ell: int) -> int:
    """Sum of N_g over every generator g of F_q^x."""
    check_ell(field, ell, proper=True)
    return sum(count_affine(field, ell, field.g0**t) for t in generator_exponents(field))


def aggregate_N_reduced(field: FieldCtx, ell: int) -> int:
    """phi(q-1)/phi(ell) times the sum of N_(g0^t) over 1 <= t <= ell coprime to ell."""
    check_ell(field, ell, proper=True)
    sub = sum(count_affine(field, ell, field.g0**t) for t in range(1, ell + 1) if math.gcd(t, ell) == 1)
    return nt.euler_phi(field.order) // nt.euler_phi(ell) * sub
