"""Cyclic quotient ages, terminality, classification, vertex reports."""

import random
from fractions import Fraction
from math import gcd

import pytest

from qhv.singular import (
    CyclicQuotient,
    NonIsolatedQuotient,
    age,
    classify_terminal_types,
    is_terminal,
    matches_terminal_form,
    wps_singularity_report,
)


class TestAge:
    def test_direct_sums(self):
        assert age(CyclicQuotient(2, (1, 1, 1)), 1) == Fraction(3, 2)
        assert age(CyclicQuotient(3, (1, 1, 2)), 2) == Fraction(5, 3)
        assert age(CyclicQuotient(3, (1, 1, 1)), 1) == 1

    def test_range_validation(self):
        q = CyclicQuotient(5, (1, 2, 3))
        with pytest.raises(ValueError):
            age(q, 0)
        with pytest.raises(ValueError):
            age(q, 5)

    def test_age_symmetry_for_isolated_quotients(self):
        # age(j) + age(n-j) counts the nonzero residues among j*wi mod n
        for n in range(2, 21):
            units = [w for w in range(1, n) if gcd(w, n) == 1]
            rng = random.Random(n)
            for _ in range(10):
                ws = tuple(rng.choice(units) for _ in range(3))
                q = CyclicQuotient(n, ws)
                for j in range(1, n):
                    nonzero = sum(1 for w in ws if (j * w) % n != 0)
                    assert age(q, j) + age(q, n - j) == nonzero


class TestTerminality:
    def test_half_point_is_terminal(self):
        assert is_terminal(CyclicQuotient(2, (1, 1, 1)))

    def test_third_point_is_canonical_not_terminal(self):
        assert not is_terminal(CyclicQuotient(3, (1, 1, 1)))

    def test_third_point_with_inverse_pair(self):
        assert is_terminal(CyclicQuotient(3, (1, 1, 2)))

    def test_non_isolated_rejected(self):
        with pytest.raises(NonIsolatedQuotient):
            is_terminal(CyclicQuotient(4, (1, 2, 3)))

    def test_permutation_invariance(self):
        rng = random.Random(17)
        for _ in range(100):
            n = rng.randint(2, 15)
            units = [w for w in range(1, n) if gcd(w, n) == 1]
            ws = [rng.choice(units) for _ in range(3)]
            value = is_terminal(CyclicQuotient(n, tuple(ws)))
            rng.shuffle(ws)
            assert is_terminal(CyclicQuotient(n, tuple(ws))) == value

    def test_generator_change_invariance(self):
        rng = random.Random(23)
        for _ in range(100):
            n = rng.randint(2, 15)
            units = [w for w in range(1, n) if gcd(w, n) == 1]
            ws = tuple(rng.choice(units) for _ in range(3))
            u = rng.choice(units)
            scaled = tuple((u * w) % n for w in ws)
            assert is_terminal(CyclicQuotient(n, ws)) == is_terminal(
                CyclicQuotient(n, scaled)
            )


class TestClassification:
    def test_small_orders_empty_table(self):
        assert classify_terminal_types(10) == []

    def test_order_two_unique_case(self):
        q = CyclicQuotient(2, (1, 1, 1))
        assert is_terminal(q) and matches_terminal_form(q)

    def test_seven_1_2_4_not_of_form(self):
        q = CyclicQuotient(7, (1, 2, 4))
        assert not matches_terminal_form(q)
        assert not is_terminal(q)  # age at j=1 is exactly 1

    def test_five_1_2_3_is_of_form(self):
        q = CyclicQuotient(5, (1, 2, 3))
        assert matches_terminal_form(q) and is_terminal(q)

    def test_brute_force_oracle_small_orders(self):
        # independent re-derivation: a triple is of type (1, a, -a) up to a
        # unit and permutation iff some two weights sum to 0 mod n
        for n in range(2, 13):
            units = [w for w in range(1, n) if gcd(w, n) == 1]
            for w1 in units:
                for w2 in units:
                    for w3 in units:
                        q = CyclicQuotient(n, (w1, w2, w3))
                        pair_sum = (
                            (w1 + w2) % n == 0
                            or (w1 + w3) % n == 0
                            or (w2 + w3) % n == 0
                        )
                        assert matches_terminal_form(q) == pair_sum


class TestWps:
    def test_1112(self):
        report = wps_singularity_report([1, 1, 1, 2])
        assert len(report) == 1
        assert report[0]["type"] == "(1/2)(1, 1, 1)"
        assert report[0]["terminal"] is True

    def test_1123(self):
        report = wps_singularity_report([1, 1, 2, 3])
        types = [(r["type"], r["terminal"]) for r in report]
        assert types == [("(1/2)(1, 1, 1)", True), ("(1/3)(1, 1, 2)", True)]

    def test_smooth_projective_space(self):
        assert wps_singularity_report([1, 1, 1, 1]) == []

    def test_ill_formed_weights_rejected(self):
        with pytest.raises(ValueError):
            wps_singularity_report([2, 2, 2, 2])
        with pytest.raises(ValueError):
            wps_singularity_report([1, 1, 2])
        with pytest.raises(ValueError):
            wps_singularity_report([0, 1, 1, 1])
