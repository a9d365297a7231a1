"""
Test Cable Bounds Module

This module contains tests for the cabling bounds, the bound checker and the
grading checks behind them.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cable import (
    BoundPair,
    CableParams,
    cable_bounds,
    cable_generators,
    check_bounds,
    grading_transform,
    hbar_check,
    sandwich_check,
    sandwich_samples,
    tau_bounds,
)
from cfk import tau, upsilon
from plfun import PLFunc, restrict, subtract_linear
from shared_components import DomainError, InputError
from staircase import cable_alexander, lspace_knot_complex, torus_alexander, torus_knot_complex

F = Fraction

TREFOIL_UPS = PLFunc.from_points([(0, 0), (1, -1), (2, 0)])


def trefoil_cable(q: int):
    return lspace_knot_complex(cable_alexander(torus_alexander(2, 3), 2, q), f"T(2,3)_(2,{q})")


class TestCableParams:
    """Test cases for cabling parameters."""

    def test_from_n(self):
        """Test the (p, pn + 1) convention."""
        params = CableParams.from_n(2, 8)
        assert params.q == 17
        assert params.n == 8
        assert params.edge == 1
        assert CableParams(3, 5).n is None

    def test_invalid(self):
        """Test that non-coprime or non-positive p are refused."""
        with pytest.raises(InputError, match="coprime"):
            CableParams(2, 4)
        with pytest.raises(InputError):
            CableParams(0, 1)


class TestCableBounds:
    """Test cases for cable_bounds."""

    def test_unknot_cable(self):
        """Test the bounds for the (2, 3) cable of the unknot."""
        bounds = cable_bounds(PLFunc.zero(), CableParams(2, 3))
        assert bounds.lower == PLFunc.linear(-2, 0, (0, 1))
        assert bounds.upper == PLFunc.linear(-1, 0, (0, 1))
        assert bounds.reflected_lower.domain == (1, 2)
        assert bounds.reflected_upper.eval(2) == 0

    def test_p_one_is_identity(self):
        """Test that p = 1 gives lower = upper = Upsilon_K on [0, 2]."""
        bounds = cable_bounds(TREFOIL_UPS, CableParams(1, 5))
        assert bounds.lower == TREFOIL_UPS
        assert bounds.upper == TREFOIL_UPS

    @settings(max_examples=30, deadline=None)
    @given(p=st.integers(min_value=2, max_value=7), n=st.integers(min_value=-4, max_value=6))
    def test_band_width(self, p, n):
        """Test upper - lower = (p - 1) t."""
        bounds = cable_bounds(TREFOIL_UPS, CableParams.from_n(p, n))
        assert bounds.upper - bounds.lower == PLFunc.linear(p - 1, 0, (0, F(2, p)))

    def test_mirror_trefoil_cable(self):
        """Test the (2, 17) cable of T(2,-3) on [1/2, 1]."""
        bounds = cable_bounds(upsilon(torus_knot_complex(2, -3)), CableParams(2, 17))
        half = F(1, 2)
        assert restrict(bounds.lower, half, 1) == PLFunc.from_points([(half, F(-7, 2)), (1, -9)])
        assert restrict(bounds.upper, half, 1) == PLFunc.from_points([(half, -3), (1, -8)])

    def test_partial_input_refused(self):
        """Test that Upsilon_K must be total."""
        with pytest.raises(DomainError):
            cable_bounds(PLFunc.zero((0, 1)), CableParams(2, 3))

    def test_model_round_trip(self):
        """Test BoundPair through its JSON model, and domain checks on read."""
        bounds = cable_bounds(TREFOIL_UPS, CableParams(3, 4))
        assert BoundPair.from_model(bounds.to_model()) == bounds
        model = cable_bounds(TREFOIL_UPS, CableParams(2, 5)).to_model()
        model.p = 3
        with pytest.raises(InputError, match="must live on"):
            BoundPair.from_model(model)


class TestCheckBounds:
    """Test cases for check_bounds."""

    def test_torus_knots_attain_bounds(self):
        """Test that T(2,3) satisfies the bounds of the unknot (2, 3) cable."""
        cert = check_bounds(upsilon(torus_knot_complex(2, 3)), cable_bounds(PLFunc.zero(), CableParams(2, 3)))
        assert cert.passed
        assert cert.verdict == "pass"
        assert cert.checked == 4

    def test_violation_witness(self):
        """Test that the zero function breaks the upper bound at the first checked time."""
        cert = check_bounds(PLFunc.zero(), cable_bounds(PLFunc.zero(), CableParams(2, 3)))
        assert not cert.passed
        assert cert.witness_t == F(1, 2)
        assert "upper bound violated" in cert.detail
        assert cert.to_model().witness.t == "1/2"

    def test_lspace_cables(self):
        """Test that L-space cables of T(2,3) lie within their bounds."""
        for q in (3, 5, 7):
            cert = check_bounds(upsilon(trefoil_cable(q)), cable_bounds(TREFOIL_UPS, CableParams(2, q)))
            assert cert.passed, cert.detail

    def test_partial_candidate(self):
        """Test that the candidate must be total."""
        with pytest.raises(DomainError):
            check_bounds(PLFunc.zero((0, 1)), cable_bounds(PLFunc.zero(), CableParams(2, 3)))


class TestTauBounds:
    """Test cases for tau_bounds."""

    def test_examples(self):
        """Test the range for the (2, 3) cable of T(2,3) and the T(2,-3) family."""
        assert tau_bounds(1, CableParams(2, 3)) == (3, 4)
        for n in range(2, 10):
            assert tau_bounds(-1, CableParams.from_n(2, n)) == (n - 2, n - 1)

    def test_lspace_cables_in_range(self):
        """Test tau of L-space cables against the range."""
        for q in (3, 5, 7):
            lo, hi = tau_bounds(1, CableParams(2, q))
            assert lo <= tau(trefoil_cable(q)) <= hi


class TestGradingChecks:
    """Test cases for the grading transform, sandwich and hbar checks."""

    def test_grading_transform(self):
        """Test A' = pA + pn(p-1)/2 + l."""
        assert grading_transform(0, 0, 2, 0) == 0
        assert grading_transform(3, 1, 2, 4) == 11
        assert grading_transform(0, 1, 2, 0) == 1
        with pytest.raises(InputError):
            grading_transform(0, 2, 2, 0)

    def test_cable_generators(self):
        """Test one entry per generator and strand."""
        gens = cable_generators(torus_knot_complex(2, 3), 2)
        assert gens == [(1, 0), (1, 1), (0, 0), (0, 1), (-1, 0), (-1, 1)]

    def test_samples(self):
        """Test sample t values cover (0, 2/p]."""
        samples = sandwich_samples(2, 16)
        assert len(samples) == 16
        assert samples[0][0] == F(1, 16)
        assert samples[-1][0] == 1

    def test_sandwich(self):
        """Test that both inclusions hold for the trefoil generators."""
        gens = cable_generators(torus_knot_complex(2, 3), 3)
        cert = sandwich_check(gens, 3, 2, sandwich_samples(3))
        assert cert.passed
        assert cert.checked > 0

    def test_sandwich_sample_range(self):
        """Test that samples outside [0, 2/p] are refused."""
        with pytest.raises(InputError):
            sandwich_check([(0, 0)], 2, 1, [(F(3, 2), F(0))])

    def test_hbar_torus_family(self):
        """Test hbar is constant in q for unknot cables."""
        family = [(q, upsilon(torus_knot_complex(2, q))) for q in (3, 5, 7)]
        cert = hbar_check(family, 2)
        assert cert.passed
        assert cert.checked == 6

    def test_hbar_violation(self):
        """Test that a decreasing hbar is caught."""
        family = [(3, PLFunc.zero()), (5, subtract_linear(PLFunc.zero(), 2))]
        assert not hbar_check(family, 2).passed

    def test_hbar_invalid_family(self):
        """Test repeated or non-coprime q values are refused."""
        with pytest.raises(InputError):
            hbar_check([(3, PLFunc.zero()), (3, PLFunc.zero())], 2)
        with pytest.raises(InputError):
            hbar_check([(4, PLFunc.zero())], 2)
