"""
Test Staircase Module

This module contains tests for Alexander polynomials and L-space staircases.
"""

from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from cfk import tau, validate
from shared_components import InputError, LaurentPolyModel, NotLSpaceError
from staircase import (
    LaurentPoly,
    StaircaseSpec,
    alexander_of_complex,
    cable_alexander,
    lspace_exponents,
    lspace_knot_complex,
    staircase_battery,
    staircase_complex,
    torus_alexander,
    torus_knot_complex,
)

TREFOIL = LaurentPoly.from_dict({1: 1, 0: -1, -1: 1})


@st.composite
def torus_pairs(draw):
    p = draw(st.integers(min_value=2, max_value=5))
    q = draw(st.integers(min_value=p + 1, max_value=9).filter(lambda q: gcd(p, q) == 1))
    return p, q


class TestLaurentPoly:
    """Test cases for the Laurent polynomial type."""

    def test_terms_are_ordered(self):
        """Test that from_dict drops zeros and sorts exponents downward."""
        d = LaurentPoly.from_dict({-1: 1, 1: 1, 0: -1, 5: 0})
        assert d.terms == ((1, 1), (0, -1), (-1, 1))
        assert d.exponents == [1, 0, -1]

    def test_invalid_terms(self):
        """Test that zero coefficients and unordered exponents are refused."""
        with pytest.raises(InputError):
            LaurentPoly(((1, 0),))
        with pytest.raises(InputError):
            LaurentPoly(((0, 1), (1, 1)))

    def test_multiplication(self):
        """Test (t - 1 + t^-1)^2."""
        assert TREFOIL * TREFOIL == LaurentPoly.from_dict({2: 1, 1: -2, 0: 3, -1: -2, -2: 1})

    def test_substitute_and_evaluate(self):
        """Test P(t^p) and P(1)."""
        assert TREFOIL.substitute_power(2) == LaurentPoly.from_dict({2: 1, 0: -1, -2: 1})
        assert TREFOIL.at_one() == 1
        assert TREFOIL.is_symmetric()
        assert not LaurentPoly.from_dict({1: 1, 0: -1}).is_symmetric()

    def test_model(self):
        """Test exponent keys as strings, and rejection of non-integer keys."""
        model = TREFOIL.to_model()
        assert model.coeffs == {"-1": 1, "0": -1, "1": 1}
        assert LaurentPoly.from_model(model) == TREFOIL
        with pytest.raises(InputError):
            LaurentPoly.from_model(LaurentPolyModel(coeffs={"x": 1}))


class TestAlexander:
    """Test cases for torus and cable Alexander polynomials."""

    def test_trefoil(self):
        """Test Delta_{T(2,3)} = t - 1 + t^-1."""
        assert torus_alexander(2, 3) == TREFOIL
        assert torus_alexander(2, -3) == TREFOIL

    def test_t34(self):
        """Test Delta_{T(3,4)} = t^3 - t^2 + 1 - t^-2 + t^-3."""
        assert torus_alexander(3, 4) == LaurentPoly.from_dict({3: 1, 2: -1, 0: 1, -2: -1, -3: 1})

    def test_trivial_torus_knots(self):
        """Test T(1, q) is the unknot."""
        assert torus_alexander(1, 7) == LaurentPoly.one()

    def test_not_coprime(self):
        """Test that non-coprime parameters are refused."""
        with pytest.raises(InputError, match="not coprime"):
            torus_alexander(2, 4)
        with pytest.raises(InputError):
            torus_alexander(2, 0)

    def test_trefoil_cables(self):
        """Test the (2, 3) and (2, 7) cables of T(2,3)."""
        assert cable_alexander(TREFOIL, 2, 3) == LaurentPoly.from_dict({3: 1, 2: -1, 0: 1, -2: -1, -3: 1})
        seven = cable_alexander(TREFOIL, 2, 7)
        assert seven == LaurentPoly.from_dict({5: 1, 4: -1, 1: 1, 0: -1, -1: 1, -4: -1, -5: 1})
        assert len(seven.terms) == 7

    @settings(max_examples=30, deadline=None)
    @given(pq=torus_pairs())
    def test_torus_polynomial_shape(self, pq):
        """Test Delta(1) = 1, symmetry and top degree equal to the genus."""
        p, q = pq
        d = torus_alexander(p, q)
        assert d.at_one() == 1
        assert d.is_symmetric()
        assert d.exponents[0] == (p - 1) * (q - 1) // 2


class TestStaircase:
    """Test cases for staircase models."""

    def test_spec_validation(self):
        """Test the exponent conditions."""
        with pytest.raises(InputError, match="odd"):
            StaircaseSpec((1, -1))
        with pytest.raises(InputError, match="decrease"):
            StaircaseSpec((1, 1, -1))
        with pytest.raises(InputError, match="symmetric"):
            StaircaseSpec((2, 0, -1))
        with pytest.raises(InputError):
            StaircaseSpec(())

    def test_trefoil_gradings(self):
        """Test generator gradings and arrows of the T(2,3) staircase."""
        c = staircase_complex(StaircaseSpec((1, 0, -1)))
        assert [(g.alex, g.maslov) for g in c.generators] == [(1, 0), (0, -1), (-1, -2)]
        assert [(t.target, t.upower) for t in c.terms("z1")] == [("z0", 1), ("z2", 0)]

    def test_t34_gradings(self):
        """Test Maslov gradings with a step of two."""
        c = torus_knot_complex(3, 4)
        assert [g.maslov for g in c.generators] == [0, -1, -2, -5, -6]
        assert c.name == "T(3,4)"

    def test_negative_q_is_dual(self):
        """Test T(p, -q) is the mirror staircase."""
        c = torus_knot_complex(2, -3)
        assert [(g.alex, g.maslov) for g in c.generators] == [(-1, 0), (0, 1), (1, 2)]
        assert tau(c) == -1

    def test_unknot_staircase(self):
        """Test the single-generator staircase."""
        c = staircase_complex(StaircaseSpec((0,)))
        assert validate(c) == []
        assert tau(c) == 0

    def test_not_lspace(self):
        """Test the figure-eight polynomial -t + 3 - t^-1 is refused."""
        d = LaurentPoly.from_dict({1: -1, 0: 3, -1: -1})
        with pytest.raises(NotLSpaceError, match="not L-space form"):
            lspace_exponents(d)
        with pytest.raises(NotLSpaceError):
            lspace_knot_complex(LaurentPoly.from_dict({1: 1, 0: -1}))

    def test_alexander_round_trip(self):
        """Test that the Euler characteristic recovers the polynomial."""
        d = cable_alexander(TREFOIL, 2, 7)
        assert alexander_of_complex(lspace_knot_complex(d)) == d

    def test_long_staircase(self):
        """Test a seven-step staircase with uneven steps."""
        c = staircase_complex(StaircaseSpec((5, 4, 1, 0, -1, -4, -5)))
        assert validate(c) == []
        assert [g.maslov for g in c.generators] == [0, -1, -2, -3, -4, -9, -10]
        assert tau(c) == 5

    @settings(max_examples=30, deadline=None)
    @given(pq=torus_pairs())
    def test_torus_tau(self, pq):
        """Test tau(T(p, q)) = (p-1)(q-1)/2."""
        p, q = pq
        assert tau(torus_knot_complex(p, q)) == (p - 1) * (q - 1) // 2

    def test_battery(self):
        """Test that the battery is nonempty, bounded in size and all valid."""
        battery = list(staircase_battery(9))
        labels = [label for label, _ in battery]
        assert "T(2,3)" in labels
        assert "T(2,3)_(2,7)" in labels
        assert all(len(c.generators) <= 9 for _, c in battery)
