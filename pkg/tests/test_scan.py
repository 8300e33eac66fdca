import csv
import io

import pytest

from cacforge import nt
from cacforge.diagonal import solvability_bound
from cacforge.errors import DomainError
from cacforge.field import make_subgroup_H
from cacforge.scan import (
    COVERED,
    FAILED,
    HOLDS,
    VACUOUS,
    ScanRecord,
    fib_prime_sequence,
    fibonacci_primitive_roots,
    has_index,
    index_of_H,
    p_ell_set,
    records_to_csv,
    scan_range,
    verify_conjecture,
    witness_from_fibonacci,
)


class TestVerify:
    def test_p31(self):
        r = verify_conjecture(31)
        assert r.verdict == HOLDS and r.ell0 == 3 and r.witness_ok()
        b = r.g * pow(r.y, 3, 31) % 31
        c = r.g**2 * pow(r.x, 3, 31) % 31
        assert (1 + b + c) % 31 == 0

    def test_p7_vacuous(self):
        r = verify_conjecture(7)
        assert (r.verdict, r.ell0, r.g) == (VACUOUS, 1, None)

    def test_p127(self):
        r = verify_conjecture(127)
        assert r.verdict == HOLDS and r.ell0 == 9 and r.witness_ok()

    def test_large_prime_covered_by_bound(self):
        for p, ell0 in [(1000039, 3), (1000081, 20)]:
            r = verify_conjecture(p)
            assert r.ell0 == ell0 and p >= solvability_bound(ell0)
            assert r.verdict == COVERED and r.g is None

    def test_rejects_even(self):
        with pytest.raises(DomainError):
            verify_conjecture(2)
        with pytest.raises(DomainError):
            verify_conjecture(15)

    def test_index_matches_subgroup(self):
        for p in nt.primes_between(5, 3000):
            assert index_of_H(p) == make_subgroup_H(p).index


class TestRange:
    def test_small_range_with_filter(self):
        recs = scan_range(5, 100, ell_filter=3)
        assert 31 in [r.p for r in recs]
        assert all(r.ell0 == 3 for r in recs)

    def test_covers_every_prime(self):
        recs = scan_range(5, 50)
        assert [r.p for r in recs] == nt.primes_between(5, 50)
        assert all(r.verdict != FAILED for r in recs)

    def test_empty(self):
        assert scan_range(24, 28) == []

    def test_parallel_matches_serial(self):
        strip = lambda recs: [(r.p, r.ell0, r.verdict, r.g, r.x, r.y) for r in recs]  # noqa: E731
        serial = scan_range(3, 6000)
        parallel = scan_range(3, 6000, jobs=3, block=250)
        assert strip(serial) == strip(parallel)

    def test_records_are_consistent(self):
        for r in scan_range(3, 20000):
            assert r.verdict != FAILED
            if r.verdict == HOLDS:
                assert r.witness_ok()
            if r.ell0 >= 3 and r.p >= solvability_bound(r.ell0):
                assert r.verdict in (HOLDS, COVERED)

    def test_csv(self):
        text = records_to_csv(scan_range(29, 31), timing=False)
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["p", "ell0", "verdict", "g", "x", "y", "ms"]
        assert rows[1] == ["29", "1", "vacuous", "", "", "", ""]
        assert rows[2][:3] == ["31", "3", "holds"]

    def test_witness_ok_rejects_tampering(self):
        r = verify_conjecture(31)
        bad = ScanRecord(r.p, r.ell0, r.verdict, r.g, r.x + 1, r.y)
        assert not bad.witness_ok()


class TestPEll:
    def test_examples(self):
        s = p_ell_set(9)
        assert (s.bound, s.primes) == (194, [127])
        assert p_ell_set(3).primes == []
        assert p_ell_set(5).primes == [p for p in nt.primes_between(3, 33) if index_of_H(p) == 5]

    def test_against_direct_scan(self):
        for ell in range(3, 40):
            b = solvability_bound(ell)
            if b > 2 * 10**5:
                continue
            expected = [p for p in nt.primes_between(3, b - 1) if index_of_H(p) == ell]
            assert p_ell_set(ell).primes == expected, ell

    def test_floor(self):
        s = p_ell_set(9, lo=127)
        assert s.primes == [] and s.lo == 127

    def test_has_index(self):
        for p in nt.primes_between(3, 5000):
            for ell in nt.divisors(p - 1):
                assert has_index(p, ell) == (index_of_H(p) == ell)

    def test_rejects_small_ell(self):
        with pytest.raises(DomainError):
            p_ell_set(2)

    @pytest.mark.slow
    def test_largest_prime_for_2730(self):
        # b(2730) is about 7.6e9, so only the part above 2^30 is searched here
        s = p_ell_set(2730, lo=2**30)
        assert s.bound == 7615354754
        assert s.primes[-1] == 7324065841
        assert all(index_of_H(p) == 2730 for p in s.primes[-3:])


class TestFibonacci:
    def test_examples(self):
        assert 3 in fibonacci_primitive_roots(5)
        assert fibonacci_primitive_roots(7) == []
        assert fibonacci_primitive_roots(31)

    def test_roots_are_what_they_claim(self):
        for p in nt.primes_between(3, 3000):
            brute = [g for g in range(1, p) if (g * g - g - 1) % p == 0 and nt.is_primitive_root(g, p)]
            assert fibonacci_primitive_roots(p) == brute

    def test_sequence(self):
        assert fib_prime_sequence(109) == [5, 11, 19, 31, 41, 59, 61, 71, 79, 109]
        assert fib_prime_sequence(4) == []
        assert fib_prime_sequence(12) == [5, 11]

    def test_fibonacci_root_gives_solution(self):
        for p in fib_prime_sequence(20000):
            ell = index_of_H(p)
            if ell < 3:
                continue
            g, x, y = witness_from_fibonacci(p, fibonacci_primitive_roots(p)[0])
            assert x * y % p and (g * g * pow(x, ell, p) + g * pow(y, ell, p) + 1) % p == 0
            assert verify_conjecture(p).verdict == HOLDS
