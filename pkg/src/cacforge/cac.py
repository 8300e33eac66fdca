"""Weight-3 conflict-avoiding codes of prime length.

A CAC of length n is a family of 3-subsets of Z/nZ whose difference sets are
pairwise disjoint.  For prime p the nonzero residues split into cosets of
H = <-1, 2>; inside a coset rH the pairs {+-r 2^i} form a cycle under doubling
and an equi-difference codeword {0, a, 2a} covers two neighbouring pairs.  A
solution of g^2 X^l0 + g Y^l0 + 1 = 0 supplies triples a + b + c = 0 in three
distinct cosets; each becomes a codeword {0, a, -c} that uses up the pair each
chain would otherwise leave uncovered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import nt
from .diagonal import CacSizeSheet, cac_size_sheet, find_witness_prime
from .errors import ConstructionError, DomainError
from .field import h_order, make_subgroup_H

EQUI = "equi"
NONEQUI = "nonequi"


@dataclass(frozen=True)
class Codeword:
    elements: tuple[int, int, int]
    kind: str

    def __post_init__(self):
        if len(self.elements) != 3 or len(set(self.elements)) != 3:
            raise DomainError(f"codeword needs 3 distinct residues, got {self.elements}")
        if self.kind not in (EQUI, NONEQUI):
            raise DomainError(f"unknown codeword kind {self.kind!r}")
        object.__setattr__(self, "elements", tuple(sorted(self.elements)))

    @classmethod
    def _trusted(cls, elements: tuple[int, int, int], kind: str) -> Codeword:
        # skips validation; callers pass sorted distinct residues
        w = object.__new__(cls)
        object.__setattr__(w, "elements", elements)
        object.__setattr__(w, "kind", kind)
        return w

    @classmethod
    def equi(cls, a: int, n: int) -> Codeword:
        return cls(_residues((0, a, 2 * a), n), EQUI)

    @classmethod
    def from_elements(cls, elements, n: int) -> Codeword:
        """Build a codeword, classifying it as equi-difference when it is {0, a, 2a}."""
        elems = _residues(elements, n)
        s = set(elems)
        is_equi = 0 in s and any({0, a, 2 * a % n} == s for a in s if a)
        return cls(elems, EQUI if is_equi else NONEQUI)


def _residues(values, n: int) -> tuple[int, ...]:
    out = tuple(sorted(v % n for v in values))
    if len(set(out)) != len(out):
        raise DomainError(f"residues {values} collide mod {n}")
    return out


def difference_set(w: Codeword, n: int) -> frozenset[int]:
    """{x_i - x_j : i != j} mod n."""
    e = w.elements
    return frozenset((a - b) % n for a in e for b in e if a != b)


@dataclass
class CacCode:
    n: int
    codewords: list[Codeword]
    witness: dict | None = None

    @property
    def size(self) -> int:
        return len(self.codewords)

    @property
    def delta_union(self) -> set[int]:
        out: set[int] = set()
        for w in self.codewords:
            out |= difference_set(w, self.n)
        return out

    def as_array(self) -> np.ndarray:
        return np.array([w.elements for w in self.codewords], dtype=np.int64).reshape(-1, 3)

    def canonical(self) -> CacCode:
        """Same code with codewords ordered by the smallest element of their difference sets."""
        arr = self.as_array()
        key = _diff_matrix(arr, self.n).min(axis=1)
        order = np.lexsort((arr[:, 2], arr[:, 1], arr[:, 0], key))
        return CacCode(self.n, [self.codewords[i] for i in order], self.witness)


def _diff_matrix(arr: np.ndarray, n: int) -> np.ndarray:
    """Row i holds the six differences x_a - x_b (a != b) of codeword i, mod n."""
    cols = [(arr[:, a] - arr[:, b]) % n for a in range(3) for b in range(3) if a != b]
    return np.stack(cols, axis=1) if len(arr) else np.zeros((0, 6), dtype=np.int64)


@dataclass(frozen=True)
class Conflict:
    first: Codeword
    second: Codeword
    residue: int


@dataclass(frozen=True)
class Verdict:
    valid: bool
    conflict: Conflict | None = None

    def to_json(self) -> dict:
        if self.valid:
            return {"valid": True}
        c = self.conflict
        return {
            "valid": False,
            "conflict": {"first": list(c.first.elements), "second": list(c.second.elements), "residue": c.residue},
        }


def verify_cac(code: CacCode) -> Verdict:
    """Valid iff difference sets of distinct codewords are pairwise disjoint."""
    arr = code.as_array()
    if arr.size and (arr.min() < 0 or arr.max() >= code.n):
        raise DomainError(f"codewords are not reduced mod {code.n}")
    # fast path: drop repeats inside a row, then every residue must appear once
    diffs = np.sort(_diff_matrix(arr, code.n), axis=1)
    fresh = np.ones_like(diffs, dtype=bool)
    fresh[:, 1:] = diffs[:, 1:] != diffs[:, :-1]
    flat = diffs[fresh]
    if len(np.unique(flat)) == len(flat):
        return Verdict(True)
    owner: dict[int, int] = {}
    for i, w in enumerate(code.codewords):
        for r in sorted(difference_set(w, code.n)):
            j = owner.setdefault(r, i)
            if j != i:
                return Verdict(False, Conflict(code.codewords[j], w, r))
    return Verdict(True)


# --- triples from diagonal solutions ---------------------------------------


@dataclass(frozen=True)
class TripleWitness:
    p: int
    g: int
    x: int
    y: int
    ell0: int
    triples: tuple[tuple[int, int, int], ...]
    labels: tuple[tuple[int, int, int], ...]


def derive_triples(p: int, g: int, x: int, y: int) -> TripleWitness:
    """Turn a solution (x, y) for generator g into floor(l0/3) zero-sum triples.

    With b = g y^l0 in gH and c = g^2 x^l0 in g^2 H we have 1 + b + c = 0; the
    i-th triple is g^(3i) (1, b, c), lying in the cosets g^(3i)H, g^(3i+1)H, g^(3i+2)H.
    """
    ell0 = (p - 1) // h_order(p)
    if ell0 < 3:
        raise DomainError(f"index of <-1, 2> mod {p} is {ell0} < 3; no triples needed")
    if not nt.is_primitive_root(g, p):
        raise DomainError(f"{g} is not a primitive root mod {p}")
    x, y = x % p, y % p
    if x * y == 0 or (g * g * pow(x, ell0, p) + g * pow(y, ell0, p) + 1) % p:
        raise DomainError(f"({x}, {y}) does not solve the diagonal equation with xy != 0")
    b = g * pow(y, ell0, p) % p
    c = g * g * pow(x, ell0, p) % p
    sub = make_subgroup_H(p)
    triples, labels = [], []
    for i in range(ell0 // 3):
        s = pow(g, 3 * i, p)
        tri = (s, s * b % p, s * c % p)
        lab = tuple(sub.label_relative(v, g) for v in tri)
        if lab != (3 * i, 3 * i + 1, 3 * i + 2) or sum(tri) % p:
            raise AssertionError(f"triple {tri} has coset labels {lab}")
        triples.append(tri)
        labels.append(lab)
    return TripleWitness(p, g, x, y, ell0, tuple(triples), tuple(labels))


# --- construction -----------------------------------------------------------


def _chain(r: int, p: int, half: int, covered: bytearray) -> list[Codeword]:
    """Equi-difference codewords inside the coset of r, leaving +-r uncovered when half is odd.

    ``half`` is the number of pairs {+-v} in a coset; the pairs are r 2^i for
    0 <= i < half.  With half odd the doubling cycle has odd length, so the
    codewords take pairs (1,2), (3,4), ... and pair 0 is left over.
    """
    v = r
    for _ in range(half):
        covered[v] = covered[p - v] = 1
        v = 2 * v % p
    start = 1 if half % 2 else 0
    a = r * pow(2, start, p) % p
    out = []
    for _ in range(half // 2):
        b = 2 * a % p
        out.append(Codeword._trusted((0, a, b) if a < b else (0, b, a), EQUI))
        a = 4 * a % p
    return out


def build_optimal_cac(p: int) -> tuple[CacCode, CacSizeSheet]:
    """A weight-3 CAC of prime length p attaining the upper size bound."""
    sheet = cac_size_sheet(p)
    o2, ell0 = sheet.o2, sheet.ell0
    half = o2 if o2 % 2 else o2 // 2
    codewords: list[Codeword] = []
    roots: list[int] = []
    witness = None
    if o2 % 4 and ell0 >= 3:
        found = find_witness_prime(p, ell0, require_nonzero_xy=True)
        if found is None:
            raise ConstructionError(f"no generator of F_{p}^x makes the diagonal equation with l0={ell0} solvable")
        tw = derive_triples(p, *found)
        witness = {"g": tw.g, "x": tw.x, "y": tw.y}
        for a, b, c in tw.triples:
            codewords.append(Codeword.from_elements((0, a, -c), p))
            roots.extend((a, b, c))
    covered = bytearray(p)
    for r in roots:
        codewords.extend(_chain(r, p, half, covered))
    for r in range(1, p):
        if not covered[r]:
            codewords.extend(_chain(r, p, half, covered))
    code = CacCode(p, codewords, witness).canonical()
    target = sheet.M_target if sheet.M_target is not None else (p - 1) // 4
    if code.size != target:
        raise ConstructionError(f"built {code.size} codewords for p={p}, expected {target}")
    verdict = verify_cac(code)
    if not verdict.valid:
        raise ConstructionError(f"construction for p={p} produced a conflict: {verdict.conflict}")
    return code, sheet


# --- serialisation ----------------------------------------------------------


def export_cac(code: CacCode) -> dict:
    verdict = verify_cac(code)
    if not verdict.valid:
        raise DomainError(f"refusing to export an invalid code: {verdict.conflict}")
    code = code.canonical()
    return {
        "n": code.n,
        "size": code.size,
        "codewords": [
            {"elements": list(w.elements), "kind": w.kind, "delta": sorted(difference_set(w, code.n))}
            for w in code.codewords
        ],
        "witness": code.witness,
    }


def import_cac(doc: dict | str) -> CacCode:
    if isinstance(doc, str):
        doc = json.loads(doc)
    n = int(doc["n"])
    words = []
    for entry in doc.get("codewords", []):
        w = Codeword.from_elements(entry["elements"], n)
        if "kind" in entry and entry["kind"] != w.kind:
            raise DomainError(f"codeword {entry['elements']} is {w.kind}, file says {entry['kind']}")
        words.append(w)
    if "size" in doc and doc["size"] != len(words):
        raise DomainError(f"size field {doc['size']} disagrees with {len(words)} codewords")
    return CacCode(n, words, doc.get("witness"))
