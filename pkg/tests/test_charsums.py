import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cacforge import nt
from cacforge.charsums import (
    IDENTITY_TOL,
    Character,
    aggregate_N,
    aggregate_N_reduced,
    char_eval,
    charsum_value,
    count_via_charsum,
    count_via_reduced_charsum,
    generator_subsum_value,
    jacobi_matrix,
    jacobi_sum,
)
from cacforge.diagonal import count_affine
from cacforge.errors import DomainError, ImproperDivisorError, OracleMismatch
from cacforge.field import FieldElem, generator_exponents, make_field

from conftest import prime_powers, proper_divisors

FIELDS = [(7, 3), (13, 4), (13, 6), (16, 5), (25, 6), (31, 5), (49, 8), (64, 9)]


class TestCharacters:
    def test_extension_rule_at_zero(self):
        F = make_field(13)
        assert char_eval(Character(F, 4, 0), 0) == 1
        assert char_eval(Character(F, 4, 1), 0) == 0

    def test_value_at_generator(self):
        for q, ell in FIELDS:
            F = make_field(q)
            assert abs(Character(F, ell)(F.g0) - cmath.exp(2j * math.pi / ell)) < IDENTITY_TOL

    def test_multiplicative(self):
        for q, ell in FIELDS:
            F = make_field(q)
            chi = Character(F, ell, 1)
            for a in range(1, q, 3):
                for b in range(1, q, 5):
                    ea, eb = FieldElem(F, a), FieldElem(F, b)
                    assert abs(chi(ea * eb) - chi(ea) * chi(eb)) < IDENTITY_TOL

    def test_group_structure(self):
        F = make_field(31)
        chi = Character(F, 5)
        assert (chi**5).trivial
        assert (chi * chi.inverse()).trivial
        assert (chi**2).power == 2 and (chi**7).power == 2

    def test_order_must_divide(self):
        with pytest.raises(DomainError):
            Character(make_field(31), 7)


class TestJacobi:
    @pytest.mark.parametrize("q,ell", FIELDS)
    def test_matrix_matches_direct_sum(self, q, ell):
        F = make_field(q)
        J = jacobi_matrix(F, ell)
        for j in range(ell):
            for k in range(ell):
                direct = jacobi_sum(Character(F, ell, j), Character(F, ell, k))
                assert abs(J[j, k] - direct) < 1e-7

    @pytest.mark.parametrize("q,ell", FIELDS)
    def test_identities(self, q, ell):
        F = make_field(q)
        J = jacobi_matrix(F, ell)
        minus_one = F.dlog[F.minus_one]
        zeta = np.exp(2j * np.pi * np.arange(ell) / ell)
        assert abs(J[0, 0] - q) < IDENTITY_TOL
        for j in range(ell):
            for k in range(ell):
                assert abs(J[j, k] - J[k, j]) < IDENTITY_TOL
            if j:
                assert abs(J[j, 0]) < IDENTITY_TOL
                # J(lambda, lambda^-1) = -lambda(-1)
                assert abs(J[j, (-j) % ell] + zeta[j * minus_one % ell]) < IDENTITY_TOL
                for k in range(1, ell):
                    if (j + k) % ell:
                        assert abs(abs(J[j, k]) - math.sqrt(q)) < 1e-6

    def test_f31_cubic(self):
        J = jacobi_matrix(make_field(31), 3)[1, 1]
        assert abs(abs(J) ** 2 - 31) < 1e-9

    def test_different_families_rejected(self):
        F = make_field(31)
        with pytest.raises(DomainError):
            jacobi_sum(Character(F, 3), Character(F, 5))


class TestCounts:
    def test_f11(self):
        F = make_field(11)
        assert count_via_charsum(F, 5, 7) == count_affine(F, 5, 7)

    def test_ell1(self):
        for q in (7, 16, 31):
            F = make_field(q)
            assert count_via_charsum(F, 1, F.g0) == q == count_affine(F, 1, F.g0)

    def test_f31_ell3(self):
        F = make_field(31)
        assert count_via_charsum(F, 3, 3) == count_affine(F, 3, 3)

    def test_agrees_on_small_fields(self):
        for q in prime_powers(60, lo=3):
            F = make_field(q)
            for ell in proper_divisors(q - 1):
                for t in generator_exponents(F):
                    g = F.g0**t
                    v = charsum_value(F, ell, g)
                    assert abs(v - count_affine(F, ell, g)) < 1e-6

    def test_requires_generator_and_proper(self):
        F = make_field(13)
        with pytest.raises(DomainError):
            count_via_charsum(F, 4, 3)
        with pytest.raises(ImproperDivisorError):
            count_via_charsum(F, 12, 2)

    def test_tolerance_violation_raises(self, monkeypatch):
        import cacforge.charsums as cs

        F = make_field(31)
        monkeypatch.setattr(cs, "charsum_value", lambda *a: complex(12.4))
        with pytest.raises(OracleMismatch):
            cs.count_via_charsum(F, 3, 3)


class TestReducedSums:
    @pytest.mark.parametrize("q,ell,t", [(31, 3, 1), (11, 5, 1), (19, 6, 5)])
    def test_examples(self, q, ell, t):
        F = make_field(q)
        assert count_via_reduced_charsum(F, ell, t) == count_affine(F, ell, F.g0**t)

    def test_domain(self):
        F = make_field(19)
        with pytest.raises(DomainError):
            count_via_reduced_charsum(F, 6, 3)
        with pytest.raises(DomainError):
            count_via_reduced_charsum(F, 2, 1)

    def test_subsum_and_aggregate(self):
        for q in prime_powers(200, lo=3):
            F = make_field(q)
            for ell in proper_divisors(q - 1):
                if ell < 3:
                    continue
                sub = sum(count_affine(F, ell, F.g0**t) for t in range(1, ell + 1) if math.gcd(t, ell) == 1)
                assert abs(generator_subsum_value(F, ell) - sub) < 1e-6, (q, ell)
                assert aggregate_N(F, ell) == aggregate_N_reduced(F, ell)

    def test_counterexamples(self):
        assert aggregate_N(make_field(13), 6) == 0
        assert aggregate_N(make_field(23), 11) == 0
        assert aggregate_N(make_field(11), 5) > 0


@given(st.sampled_from(prime_powers(200, lo=3)), st.data())
@settings(max_examples=60, deadline=None)
def test_random_generator_counts(q, data):
    F = make_field(q)
    divs = proper_divisors(q - 1)
    ell = data.draw(st.sampled_from(divs))
    t = data.draw(st.sampled_from(generator_exponents(F)))
    assert count_via_charsum(F, ell, F.g0**t) == count_affine(F, ell, F.g0**t)
