"""
Test Summand Module

This module contains tests for the singularity intervals, the slope-change
certificate and the triangular-matrix independence certificate.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pin import KnotFacts
from plfun import PLFunc
from shared_components import Certificate, DomainError, InputError
from summand import (
    XiInterval,
    certify_xi_interval,
    d_facts,
    first_singularity,
    independence_certificate,
    iterated_facts,
    iterated_lower_bound,
    slope_change_one,
    summand_certificate,
    upsilon_d,
    xi_interval,
    xi_upper_from_bound,
)

F = Fraction


def passing(label: str = "ok") -> Certificate:
    return Certificate("slope-change-one", True, detail=label, checked=1)


class TestXiInterval:
    """Test cases for the singularity intervals."""

    def test_examples(self):
        """Test [1/p^n, 2/(1 + p^n)]."""
        assert (xi_interval(3, 1).lo, xi_interval(3, 1).hi) == (F(1, 3), F(1, 2))
        assert (xi_interval(2, 2).lo, xi_interval(2, 2).hi) == (F(1, 4), F(2, 5))

    def test_invalid(self):
        """Test p >= 2 and n >= 1."""
        with pytest.raises(InputError):
            xi_interval(1, 1)
        with pytest.raises(InputError):
            xi_interval(2, 0)

    @settings(max_examples=50)
    @given(p=st.integers(min_value=2, max_value=10), n=st.integers(min_value=2, max_value=12))
    def test_ordered_and_disjoint(self, p, n):
        """Test that consecutive intervals are strictly decreasing."""
        assert xi_interval(p, n).hi < xi_interval(p, n - 1).lo
        assert not xi_interval(p, n).overlaps(xi_interval(p, n - 1))

    def test_model(self):
        """Test exact rational strings in the model."""
        assert xi_interval(3, 2).to_model().hi == "1/5"

    def test_first_singularity(self):
        """Test the smallest interior breakpoint."""
        assert first_singularity(upsilon_d()) == 1
        assert first_singularity(PLFunc.zero()) is None


class TestIteratedBound:
    """Test cases for the iterated cabling lower bound."""

    def test_single_step(self):
        """Test the (2, 1) cable of D gives t - 2 on [1/2, 1]."""
        bound = iterated_lower_bound(upsilon_d(), 2, 1)
        assert bound == PLFunc.linear(1, -2, (F(1, 2), 1))

    def test_mixed_parameters(self):
        """Test a (2, 1) then (3, 1) cable lands on [1/6, 1/3]."""
        bound = iterated_lower_bound(upsilon_d(), [2, 3])
        assert bound == PLFunc.linear(1, -2, (F(1, 6), F(1, 3)))

    def test_invalid(self):
        """Test parameter and domain checks."""
        with pytest.raises(InputError):
            iterated_lower_bound(upsilon_d(), [2, 3], 3)
        with pytest.raises(InputError):
            iterated_lower_bound(upsilon_d(), [2, 1])
        with pytest.raises(InputError):
            iterated_lower_bound(upsilon_d(), 2)
        with pytest.raises(DomainError):
            iterated_lower_bound(PLFunc.zero((0, 1)), 2, 1)

    def test_iterated_facts(self):
        """Test tau and g3 multiply by p when tau = g3."""
        assert iterated_facts(d_facts(), 3, 2) == KnotFacts(9, 9, 9)
        assert iterated_facts(d_facts(), [2, 3]) == KnotFacts(6, 6, 6)

    def test_iterated_facts_undetermined(self):
        """Test that tau < g3 leaves tau of the cable open."""
        with pytest.raises(InputError, match="only known to lie"):
            iterated_facts(KnotFacts(0, 1, 1), 2, 1)

    def test_xi_upper(self):
        """Test where the line -tau t crosses the bound."""
        bound = PLFunc.linear(1, -2, (F(1, 3), F(2, 3)))
        assert xi_upper_from_bound(3, bound) == F(1, 2)
        assert xi_upper_from_bound(0, PLFunc.linear(0, -10, (0, 1))) is None

    @pytest.mark.parametrize("p,n", [(2, 1), (2, 4), (3, 2), (5, 3)])
    def test_certify_interval(self, p, n):
        """Test both ends of the interval are recomputed."""
        cert = certify_xi_interval(upsilon_d(), d_facts(), p, n)
        assert cert.passed, cert.detail
        assert cert.facts["tau(D)"] == "1"


class TestSlopeChange:
    """Test cases for slope_change_one."""

    def test_pass_and_fail(self):
        """Test xi_hi < 4/(g3 + tau)."""
        facts = KnotFacts(9, 9, 9)
        assert slope_change_one(facts, F(1, 5)).passed
        cert = slope_change_one(facts, F(1, 2))
        assert not cert.passed
        assert cert.witness_t == F(1, 2)
        assert cert.facts == {"tau": "9", "g3": "9"}

    def test_degenerate(self):
        """Test g3 + tau = 0 and negative tau."""
        assert not slope_change_one(KnotFacts(0, 0, 0), F(1, 2)).passed
        with pytest.raises(InputError):
            slope_change_one(KnotFacts(-1, 1, 1), F(1, 2))


class TestIndependence:
    """Test cases for the triangular-matrix certificate."""

    def test_empty_family(self):
        """Test that an empty family certifies nothing."""
        cert = independence_certificate([])
        assert cert.rank == 0
        assert cert.matrix == ()

    def test_unordered_intervals(self):
        """Test that overlapping intervals are inconclusive."""
        family = [
            ("a", XiInterval(2, 1, F(1, 2), F(2, 3)), passing()),
            ("b", XiInterval(2, 2, F(1, 3), F(3, 5)), passing()),
        ]
        cert = independence_certificate(family)
        assert cert.verdict == "inconclusive"
        assert "a and b" in cert.detail
        assert cert.rank == 0

    def test_failed_slope(self):
        """Test that a failing slope-change certificate is inconclusive."""
        bad = Certificate("slope-change-one", False, F(1, 2), "too wide", 1)
        family = [
            ("a", xi_interval(3, 1), passing()),
            ("b", xi_interval(3, 2), bad),
        ]
        cert = independence_certificate(family, {"tau(D)": "1"})
        assert cert.verdict == "inconclusive"
        assert "b" in cert.detail
        assert cert.facts_supplied == {"tau(D)": "1"}
        assert cert.facts_verified

    def test_family_p3(self):
        """Test J_1 .. J_6 for p = 3 is independent with a triangular matrix."""
        cert = summand_certificate(3, 6)
        assert cert.verdict == "independent-summand"
        assert cert.rank == 6
        assert [e.label for e in cert.family] == [f"J_{n}" for n in range(6, 0, -1)]
        for a in range(6):
            assert cert.matrix[a][a] == 1
            assert all(cert.matrix[a][b] == 0 for b in range(a + 1, 6))
            assert all(cert.certified[a][b] for b in range(a, 6))
            assert not any(cert.certified[a][b] for b in range(a))
        assert all(isinstance(x, int) for row in cert.matrix for x in row)
        model = cert.to_model()
        assert model.rank == 6
        assert model.matrix[5] == [0, 0, 0, 0, 0, 1]
        assert model.certified[5] == [False] * 5 + [True]
        assert model.family[0].delta == 1

    def test_family_p2(self):
        """Test the smallest strand count."""
        assert summand_certificate(2, 4).verdict == "independent-summand"

    def test_invalid_length(self):
        """Test max_n >= 0."""
        with pytest.raises(InputError):
            summand_certificate(3, -1)
