"""Point counts and solvability of g^2 X^l + g Y^l + 1 = 0 over F_q.

The fast paths group x by the value of x^l: x = 0 contributes once and every
element u of the subgroup L of l-th powers is hit by exactly l values of x.
For a right-hand side s the number of y with y^l = s is 1 (s = 0), l (s in L)
or 0, which the discrete-log table answers in O(1).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field

import numpy as np

from . import nt
from .errors import DomainError, ImproperDivisorError
from .field import FieldCtx, FieldElem, generator_exponents, h_order


def check_ell(field: FieldCtx, ell: int, proper: bool = False) -> None:
    if not isinstance(ell, (int, np.integer)) or ell < 1 or field.order % ell:
        raise DomainError(f"ell={ell} does not divide q - 1 = {field.order}")
    if proper and ell == field.order:
        raise ImproperDivisorError(f"ell={ell} equals q - 1; a proper divisor is required")


def _as_generator(field: FieldCtx, g) -> FieldElem:
    g = field.elem(g)
    if not g.is_generator():
        raise DomainError(f"{g} is not a generator of F_{field.q}^x")
    return g


def _lhs_targets(field: FieldCtx, ell: int, g: FieldElem) -> np.ndarray:
    """-(1 + g^2 u) for u = (g0^e)^ell, e = 0 .. (q-1)/ell - 1."""
    n = field.order
    u = field.pw[(np.arange(n // ell, dtype=np.int64) * ell) % n]
    return field.neg(field.add(field.mul((g * g).code, u), 1))


def _y_counts(field: FieldCtx, ell: int, g: FieldElem, targets) -> np.ndarray:
    """Number of y with g * y^ell equal to each target code."""
    targets = np.asarray(targets, dtype=np.int64)
    in_coset = (field.dlog[targets] - g.log) % ell == 0
    return np.where(targets == 0, 1, np.where(in_coset, ell, 0))


def count_affine(field: FieldCtx, ell: int, g) -> int:
    """N_g: number of (x, y) in F_q^2 with g^2 x^ell + g y^ell + 1 = 0."""
    check_ell(field, ell)
    g = field.elem(g)
    if not g:
        raise DomainError("g must be nonzero")
    at_zero = int(_y_counts(field, ell, g, field.minus_one))
    return at_zero + ell * int(_y_counts(field, ell, g, _lhs_targets(field, ell, g)).sum())


def count_affine_naive(field: FieldCtx, ell: int, g) -> int:
    """Brute-force N_g over all q^2 pairs; for cross-checking small fields."""
    g = field.elem(g)
    codes = np.arange(field.q, dtype=np.int64)
    powers = field.power(codes, ell)
    left = field.mul((g * g).code, powers)[:, None]
    right = field.mul(g.code, powers)[None, :]
    total = field.add(field.add(left, right), 1)
    return int(np.count_nonzero(total == 0))


def _infinity_count(field: FieldCtx, ell: int, g: FieldElem) -> int:
    # points (1 : y : 0) with y^ell = -g
    return int(_y_counts(field, ell, field.one, (-g).code))


def count_projective(field: FieldCtx, ell: int, g) -> int:
    """Number of F_q-points on g^2 X^ell + g Y^ell + Z^ell = 0 in the projective plane."""
    check_ell(field, ell)
    g = field.elem(g)
    return count_affine(field, ell, g) + _infinity_count(field, ell, g)


def count_projective_naive(field: FieldCtx, ell: int, g) -> int:
    """Enumerate normalised points (1:y:z), (0:1:z), (0:0:1) directly."""
    g = field.elem(g)
    codes = np.arange(field.q, dtype=np.int64)
    powers = field.power(codes, ell)
    g2 = (g * g).code
    gy = field.mul(g.code, powers)
    # (1 : y : z)
    total = field.add(field.add(g2, gy)[:, None], powers[None, :])
    count = int(np.count_nonzero(total == 0))
    # (0 : 1 : z)
    count += int(np.count_nonzero(field.add(g.code, powers) == 0))
    # (0 : 0 : 1) never lies on the curve
    return count


# --- coordinate-zero solutions ---------------------------------------------


def _ell_roots(field: FieldCtx, ell: int, s: int) -> list[int]:
    """All codes z with z^ell = s (s nonzero)."""
    e = int(field.dlog[s])
    if e % ell:
        return []
    m = field.order // ell
    return sorted(field.gen_pow(e // ell + i * m) for i in range(ell))


@dataclass
class ZeroCoordReport:
    ell: int
    g: str
    solutions: list[tuple[str, str, str]]
    exists: bool
    predicted: bool

    @property
    def consistent(self) -> bool:
        return self.exists == self.predicted


def zero_coord_rule(field: FieldCtx, ell: int) -> bool:
    """Whether a projective solution with a zero coordinate must exist: ell in {1, 2}, or ell = 4 and -1 not a 4th power."""
    if ell in (1, 2):
        return True
    if ell == 4:
        return int(field.dlog[field.minus_one]) % 4 != 0
    return False


def classify_zero_coord(field: FieldCtx, ell: int, g) -> ZeroCoordReport:
    check_ell(field, ell)
    g = _as_generator(field, g)
    f = field.format
    sols: list[tuple[str, str, str]] = []
    for z in _ell_roots(field, ell, (-g).code):
        sols.append(("0", "1", f(z)))  # g y^l + z^l = 0 with y = 1
    for z in _ell_roots(field, ell, (-(g * g)).code):
        sols.append(("1", "0", f(z)))
    for y in _ell_roots(field, ell, (-g).code):
        sols.append(("1", f(y), "0"))  # g^2 + g y^l = 0
    return ZeroCoordReport(ell, str(g), sols, bool(sols), zero_coord_rule(field, ell))


def zero_coord_naive(field: FieldCtx, ell: int, g) -> int:
    """Count projective solutions with xyz = 0 by evaluating the form along the coordinate lines.

    The normalised points with a zero coordinate are (1:y:0), (1:0:z), (0:1:z)
    and (0:0:1).  The only overlap, (1:0:0), evaluates to g^2 and is never a
    solution; (0:0:1) evaluates to 1.
    """
    g = field.elem(g)
    powers = field.power(np.arange(field.q, dtype=np.int64), ell)
    g2 = (g * g).code
    count = int(np.count_nonzero(field.add(g2, field.mul(g.code, powers)) == 0))  # (1 : y : 0)
    count += int(np.count_nonzero(field.add(g2, powers) == 0))  # (1 : 0 : z)
    count += int(np.count_nonzero(field.add(g.code, powers) == 0))  # (0 : 1 : z)
    return count


# --- witnesses --------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    g: FieldElem
    x: FieldElem
    y: FieldElem

    def residual(self, ell: int) -> FieldElem:
        g, x, y = self.g, self.x, self.y
        return g * g * x**ell + g * y**ell + 1

    def satisfies(self, ell: int) -> bool:
        return not self.residual(ell)

    def as_strings(self) -> dict:
        return {"g": str(self.g), "x": str(self.x), "y": str(self.y)}


def _witness_for(field: FieldCtx, ell: int, t: int, require_nonzero_xy: bool) -> Witness | None:
    # x runs through g0^e in ascending e; x = 0 is tried last
    n = field.order
    g = FieldElem(field, field.gen_pow(t))
    targets = _lhs_targets(field, ell, g)
    nonzero = targets != 0
    hits = nonzero & ((field.dlog[targets] - t) % ell == 0)
    if not require_nonzero_xy:
        hits |= ~nonzero
    idx = np.flatnonzero(hits)
    if idx.size:
        e = int(idx[0])
        target = int(targets[e])
        x = FieldElem(field, field.gen_pow(e))
        if target == 0:
            return Witness(g, x, field.zero)
        y = FieldElem(field, field.gen_pow(((int(field.dlog[target]) - t) % n) // ell))
        return Witness(g, x, y)
    if not require_nonzero_xy:
        d = (int(field.dlog[field.minus_one]) - t) % n
        if d % ell == 0:
            return Witness(g, field.zero, FieldElem(field, field.gen_pow(d // ell)))
    return None


def find_solvable_generator(field: FieldCtx, ell: int, require_nonzero_xy: bool = False) -> Witness | None:
    """First generator g0^t (ascending t) whose curve has a point, with that point."""
    check_ell(field, ell, proper=True)
    failed: set[int] = set()
    for t in generator_exponents(field):
        # solvability depends only on the coset g L, i.e. on t mod ell
        if t % ell in failed:
            continue
        w = _witness_for(field, ell, t, require_nonzero_xy)
        if w is not None:
            return w
        failed.add(t % ell)
    return None


def solvable_generators(field: FieldCtx, ell: int, require_nonzero_xy: bool = False) -> list[int]:
    """Exponents t of all generators g0^t that admit a solution."""
    check_ell(field, ell, proper=True)
    good: dict[int, bool] = {}
    out = []
    for t in generator_exponents(field):
        r = t % ell
        if r not in good:
            good[r] = _witness_for(field, ell, t, require_nonzero_xy) is not None
        if good[r]:
            out.append(t)
    return out


def _bsgs(base: int, target: int, order: int, p: int) -> int:
    """Least f in [0, order) with base^f = target mod p."""
    m = math.isqrt(order) + 1
    table: dict[int, int] = {}
    cur = 1
    for j in range(m):
        table.setdefault(cur, j)
        cur = cur * base % p
    giant = pow(base, -m, p)
    gamma = target
    for i in range(m + 1):
        if gamma in table:
            f = i * m + table[gamma]
            if f < order:
                return f
        gamma = gamma * giant % p
    raise ValueError(f"{target} is not a power of {base} mod {p}")


def find_witness_prime(p: int, ell: int, require_nonzero_xy: bool = True, g0: int | None = None) -> tuple[int, int, int] | None:
    """Table-free search over F_p with the same canonical order as find_solvable_generator.

    Returns (g, x, y) as residues.  Works for primes far beyond table size since a
    hit is typically found after about ell candidate values of x.
    """
    n = p - 1
    if ell < 1 or n % ell or ell == n:
        raise ImproperDivisorError(f"ell={ell} is not a proper divisor of {n}")
    g0 = nt.primitive_root(p) if g0 is None else g0
    m = n // ell
    h = pow(g0, ell, p)
    failed: set[int] = set()
    for t in range(1, n + 1):
        if math.gcd(t, n) != 1 or t % ell in failed:
            continue
        g = pow(g0, t, p)
        g2 = g * g % p
        g_inv = pow(g, -1, p)
        x, u = 1, 1
        for _ in range(m):
            target = (-1 - g2 * u) % p
            if target == 0:
                if not require_nonzero_xy:
                    return g, x, 0
            else:
                s = target * g_inv % p
                if pow(s, m, p) == 1:
                    return g, x, pow(g0, _bsgs(h, s, m, p), p)
            x = x * g0 % p
            u = u * h % p
        if not require_nonzero_xy:
            s = (p - 1) * g_inv % p
            if pow(s, m, p) == 1:
                return g, 0, pow(g0, _bsgs(h, s, m, p), p)
        failed.add(t % ell)
    return None


# --- reports ----------------------------------------------------------------


@dataclass
class DiagonalReport:
    q: int
    ell: int
    g: str
    N_affine: int
    N_proj: int
    witness: dict | None
    zero_coord_solutions: list[tuple[str, str, str]] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def solve(field: FieldCtx, ell: int, require_nonzero_xy: bool = False) -> DiagonalReport:
    """Search for a solvable generator and describe its curve (g0's curve when none exists)."""
    w = find_solvable_generator(field, ell, require_nonzero_xy)
    g = w.g if w is not None else field.g0
    zero = classify_zero_coord(field, ell, g)
    return DiagonalReport(
        q=field.q,
        ell=ell,
        g=str(g),
        N_affine=count_affine(field, ell, g),
        N_proj=count_projective(field, ell, g),
        witness=None if w is None else {"x": str(w.x), "y": str(w.y)},
        zero_coord_solutions=zero.solutions,
    )


# --- bounds ---------------------------------------------------------------


def solvability_bound(ell: int) -> int:
    """(2^omega(ell) * (ell - 3 - delta) + 2)^2 - 2 with delta = 1 iff 4 | ell."""
    if ell < 1:
        raise DomainError(f"ell must be positive, got {ell}")
    delta = 1 if ell % 4 == 0 else 0
    return (2 ** nt.omega(ell) * (ell - 3 - delta) + 2) ** 2 - 2


def crude_threshold(ell: int) -> int:
    """Least q with q > (ell-1) + (ell-1)(ell-2) sqrt(q), decided in exact integers."""
    c = (ell - 1) * (ell - 2)

    def holds(q: int) -> bool:
        lhs = q - (ell - 1)
        return lhs > 0 and lhs * lhs > c * c * q

    root = (c + math.sqrt(c * c + 4 * (ell - 1))) / 2
    # the float estimate is within a few units; the loops settle it exactly
    q = max(1, int(root * root) - 2)
    while holds(q):
        q -= 1
    while not holds(q):
        q += 1
    return q


@dataclass(frozen=True)
class BoundSheet:
    ell: int
    omega: int
    delta: int
    b: int
    genus: int
    crude_q_threshold: int
    hasse_weil_threshold: int

    def to_json(self) -> dict:
        return asdict(self)


def bound_sheet(ell: int) -> BoundSheet:
    if ell < 1:
        raise DomainError(f"ell must be positive, got {ell}")
    return BoundSheet(
        ell=ell,
        omega=nt.omega(ell),
        delta=1 if ell % 4 == 0 else 0,
        b=solvability_bound(ell),
        genus=(ell - 1) * (ell - 2) // 2,
        crude_q_threshold=crude_threshold(ell),
        hasse_weil_threshold=(ell - 1) ** 2 * (ell - 2) ** 2,
    )


def hasse_weil_check(field: FieldCtx, ell: int) -> bool:
    """|N_proj - (q+1)| <= (ell-1)(ell-2) sqrt(q) for every generator, in exact integers."""
    check_ell(field, ell)
    c = (ell - 1) * (ell - 2)
    for t in generator_exponents(field):
        dev = count_projective(field, ell, FieldElem(field, field.gen_pow(t))) - (field.q + 1)
        if dev * dev > c * c * field.q:
            return False
    return True


# --- CAC size bounds ------------------------------------------------------


@dataclass(frozen=True)
class CacSizeSheet:
    p: int
    o2: int
    ell0: int
    O_p: int
    lower: int
    upper: int
    M_target: int | None

    def to_json(self) -> dict:
        return asdict(self)


def cac_size_sheet(p: int) -> CacSizeSheet:
    """Size bounds for weight-3 CACs of prime length p."""
    if p <= 3 or not nt.is_prime(p):
        raise DomainError(f"need a prime p >= 5, got {p}")
    o2 = nt.multiplicative_order(2, p)
    ell0 = (p - 1) // h_order(p)
    if o2 % 2:
        O_p = (p - 1) // (2 * o2)
    elif o2 % 4 == 2:
        O_p = (p - 1) // o2
    else:
        O_p = 0
    lower = (p - 1 - 2 * O_p) // 4
    upper = lower + O_p // 3
    target = upper if o2 % 4 else None
    return CacSizeSheet(p, o2, ell0, O_p, lower, upper, target)


def divisor_solvability(field: FieldCtx, ell: int, ell_prime: int) -> bool:
    """Check that a solution for exponent ell maps to one for ell' | ell under the same g."""
    if ell % ell_prime:
        raise DomainError(f"{ell_prime} does not divide {ell}")
    w = find_solvable_generator(field, ell)
    if w is None:
        return True
    r = ell // ell_prime
    return Witness(w.g, w.x**r, w.y**r).satisfies(ell_prime)
