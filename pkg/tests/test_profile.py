"""Profile construction: regime validation, the shift diffeomorphism, and
pointwise verification of the closed form against its defining ODE."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peakwave import (
    DomainError,
    ProfileEvaluator,
    Regime,
    RegimeError,
    Side,
    jump_defect,
    ode_residual,
    phi_center_sq,
    phi_derivative,
    phi_eval,
    r_inverse,
    r_map,
    validate_params,
)

AA = validate_params(1.0, 1.0, -1.0, 0.0)
AR = validate_params(2.0, -1.0, -0.5, 1.0)

# Admissible points spanning both regimes, reused across residual/jump tests.
SAMPLE_POINTS = [
    (1.0, 1.0, -1.0, 0.0),
    (1.0, 1.0, -3.0, 2.0),
    (1.0, 1.0, -3.0, -2.0),
    (1.0, 1.0, -2.0, -0.5),
    (1.0, 3.0, -5.0, 1.0),
    (2.0, 0.5, -20.0, -3.0),
    (2.0, -1.0, -0.5, 1.0),
    (2.0, -1.0, -0.5, -1.0),
    (2.0, -1.0, -0.6, 0.3),
    (4.0, -2.0, -1.0, 1.2),
]


def _params(point):
    return validate_params(*point)


class TestValidateParams:
    def test_attractive_attractive(self):
        p = validate_params(1, 1, -1, 0)
        assert p.regime is Regime.ATTRACTIVE_ATTRACTIVE

    def test_attractive_repulsive(self):
        p = validate_params(2, -1, -0.5, 1)
        assert p.regime is Regime.ATTRACTIVE_REPULSIVE

    def test_frequency_bound_rejected(self):
        # -omega = 0.2 <= Z^2/4 = 0.25
        with pytest.raises(RegimeError, match="Z\\^2/4"):
            validate_params(1, 1, -0.2, 1)

    def test_boundary_is_rejected(self):
        with pytest.raises(RegimeError):
            validate_params(1, 1, -0.25, 1.0)  # -omega == Z^2/4 exactly

    def test_negative_cubic_rejected(self):
        with pytest.raises(RegimeError, match="lambda1"):
            validate_params(-1, 1, -1, 0)

    def test_zero_quintic_rejected(self):
        with pytest.raises(RegimeError, match="lambda2|quintic"):
            validate_params(1, 0, -1, 0)

    def test_ar_upper_bound(self):
        # -3*lambda1^2/(16*lambda2) = 0.75 for (2, -1)
        with pytest.raises(RegimeError, match="16"):
            validate_params(2, -1, -0.75, 0.5)
        with pytest.raises(RegimeError):
            validate_params(2, -1, -0.9, 0.5)

    def test_ar_strength_bound(self):
        # |Z| >= sqrt(3)*lambda1/(2*sqrt(-lambda2)) forces Z^2/4 >= the upper
        # frequency bound, so such strengths are always rejected.
        with pytest.raises(RegimeError):
            validate_params(2, -1, -0.74, 1.74)
        with pytest.raises(RegimeError):
            validate_params(2, -1, -0.25, -1.0)  # -omega == Z^2/4 exactly


class TestRMap:
    def test_zero(self):
        assert r_map(0.0, AA) == 0.0

    def test_odd(self):
        for s in (0.3, 1.7, 5.0):
            assert r_map(-s, AA) == pytest.approx(-float(r_map(s, AA)), abs=0)

    def test_monotone_approach_to_one(self):
        values = [float(r_map(s, AA)) for s in (2.0, 5.0, 10.0, 40.0)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert values[-1] < 1.0
        assert values[-1] > 1.0 - 1e-10

    @given(
        s=st.floats(-8.0, 8.0),
        omega=st.floats(-10.0, -0.3),
        z_frac=st.floats(-0.9, 0.9),
    )
    @settings(max_examples=60, deadline=None)
    def test_range_and_oddness_property(self, s, omega, z_frac):
        p = validate_params(1.0, 1.0, omega, z_frac * 2.0 * math.sqrt(-omega))
        y = float(r_map(s, p))
        assert -1.0 < y < 1.0
        assert float(r_map(-s, p)) == pytest.approx(-y, abs=1e-15)


class TestRInverse:
    def test_zero(self):
        assert r_inverse(0.0, AA) == 0.0

    def test_domain_error(self):
        for y in (1.0, -1.0, 1.5):
            with pytest.raises(DomainError):
                r_inverse(y, AA)

    @pytest.mark.parametrize("y", [0.1, -0.1, 0.5, -0.5, 0.9, -0.9])
    def test_roundtrip_forward(self, y):
        assert float(r_map(r_inverse(y, AA), AA)) == pytest.approx(y, abs=1e-12)

    def test_roundtrip_inverse_on_interval(self):
        # Conditioning of the inversion degrades like e^{2*sqrt(-omega)|s|},
        # so the 1e-10 roundtrip on [-10, 10] is asserted at a mild frequency.
        p = validate_params(1.0, 1.0, -0.25, 0.3)
        for s in np.linspace(-10.0, 10.0, 41):
            assert r_inverse(float(r_map(s, p)), p) == pytest.approx(s, abs=1e-10)

    def test_against_bisection_oracle(self):
        # Independent inversion: bisect r_map directly.
        p = validate_params(1.0, 1.0, -3.0, 2.0)
        y = 2.0 / (2.0 * math.sqrt(3.0))
        lo, hi = -30.0, 30.0
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            if float(r_map(mid, p)) < y:
                lo = mid
            else:
                hi = mid
        assert r_inverse(y, p) == pytest.approx(0.5 * (lo + hi), abs=1e-11)
        assert float(r_map(r_inverse(y, p), p)) == pytest.approx(y, abs=1e-12)


class TestPhiEval:
    def test_center_value_arithmetic(self):
        # phi(0)^2 = -omega/(alpha + kappa) for Z = 0.
        alpha = 0.25
        kappa = math.sqrt(alpha**2 + 1.0 / 3.0)
        expected = math.sqrt(1.0 / (alpha + kappa))
        assert float(phi_eval(0.0, AA)) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(1.06652, abs=1e-5)

    def test_first_integral_at_center(self):
        # Substituting phi(0) into the first integral closes it (phi'(0)=0 at Z=0).
        phi0 = float(phi_eval(0.0, AA))
        residual = AA.omega * phi0**2 + 0.5 * phi0**4 + (1.0 / 3.0) * phi0**6
        assert abs(residual) < 1e-14

    @pytest.mark.parametrize("point", SAMPLE_POINTS)
    def test_even(self, point):
        p = _params(point)
        x = np.array([0.3, 1.1, 2.7, 6.0])
        assert np.all(phi_eval(x, p) == phi_eval(-x, p))

    def test_z_zero_reduces_to_defect_free_formula(self):
        p = validate_params(1.0, 1.0, -2.0, 0.0)
        alpha, kappa = 0.25, math.sqrt(0.25**2 + 2.0 / 3.0)
        for x in (0.0, 0.7, 2.2):
            direct = math.sqrt(2.0 / (alpha + kappa * math.cosh(2.0 * math.sqrt(2.0) * x)))
            assert float(phi_eval(x, p)) == pytest.approx(direct, rel=1e-13)

    def test_exponential_decay(self):
        p = validate_params(1.0, 1.0, -1.0, 0.5)
        ratio = float(phi_eval(12.0, p)) / float(phi_eval(11.0, p))
        assert ratio == pytest.approx(math.exp(-1.0), rel=1e-2)

    def test_no_overflow_far_out(self):
        assert float(phi_eval(1e6, AA)) == 0.0


class TestPhiDerivative:
    def test_sides_agree_off_origin(self):
        for x in (0.5, -1.2, 3.0):
            left = float(phi_derivative(x, Side.LEFT, AR))
            right = float(phi_derivative(x, Side.RIGHT, AR))
            assert left == right

    def test_peak_slope_positive_strength(self):
        p = validate_params(1.0, 1.0, -3.0, 2.0)
        expected = -(p.z / 2.0) * float(phi_eval(0.0, p))
        assert float(phi_derivative(0.0, Side.RIGHT, p)) == pytest.approx(expected, rel=1e-13)
        assert float(phi_derivative(0.0, Side.RIGHT, p)) < 0.0

    def test_smooth_maximum_at_zero_strength(self):
        p = validate_params(1.0, 1.0, -2.0, 0.0)
        assert float(phi_derivative(0.0, Side.RIGHT, p)) == pytest.approx(0.0, abs=1e-15)

    def test_two_hump_shape_negative_strength(self):
        p = validate_params(1.0, 1.0, -3.0, -2.0)
        ev = ProfileEvaluator.from_params(p)
        assert float(ev.derivative(0.0, Side.RIGHT)) > 0.0
        assert ev.shift_b < 0.0
        # interior maxima at |x| = -b: derivative changes sign there
        b = -ev.shift_b
        assert float(ev.derivative(b - 1e-3, Side.RIGHT)) > 0.0
        assert float(ev.derivative(b + 1e-3, Side.RIGHT)) < 0.0

    def test_monotone_decay_positive_strength(self):
        p = validate_params(1.0, 1.0, -2.0, 1.0)
        x = np.linspace(0.05, 8.0, 200)
        values = phi_eval(x, p)
        assert np.all(np.diff(values) < 0.0)


class TestOdeResidual:
    @pytest.mark.parametrize("point", SAMPLE_POINTS)
    def test_residual_small(self, point):
        p = _params(point)
        nu = math.sqrt(-p.omega)
        for x in (0.7 / nu, -1.3 / nu, 0.1, 3.0 / nu):
            bound = 1e-10 * max(1.0, float(phi_eval(x, p)))
            assert abs(float(ode_residual(x, p))) < bound

    def test_specific_points(self):
        assert abs(float(ode_residual(0.7, AA))) < 1e-10
        assert abs(float(ode_residual(-1.3, AR))) < 1e-10

    def test_residual_decays(self):
        p = validate_params(1.0, 1.0, -1.0, 0.5)
        assert abs(float(ode_residual(20.0, p))) < 1e-14

    def test_origin_rejected(self):
        with pytest.raises(DomainError):
            ode_residual(0.0, AA)


class TestJumpDefect:
    @pytest.mark.parametrize(
        "point",
        [(1.0, 1.0, -3.0, 2.0), (1.0, 1.0, -3.0, -2.0), (2.0, -1.0, -0.5, -1.0)],
    )
    def test_jump_closed(self, point):
        assert abs(jump_defect(_params(point))) < 1e-12

    @pytest.mark.parametrize("point", SAMPLE_POINTS)
    def test_jump_closed_everywhere(self, point):
        assert abs(jump_defect(_params(point))) < 1e-12


class TestFirstIntegral:
    @pytest.mark.parametrize("point", SAMPLE_POINTS)
    def test_first_integral_off_origin(self, point):
        p = _params(point)
        alpha, beta = p.lambda1 / 4.0, p.lambda2 / 3.0
        for x in (0.4, 1.9, -0.9):
            phi = float(phi_eval(x, p))
            dphi = float(phi_derivative(x, Side.RIGHT, p))
            value = dphi**2 + p.omega * phi**2 + 2.0 * alpha * phi**4 + beta * phi**6
            assert abs(value) < 1e-10


class TestPhiCenterSq:
    def test_matches_direct_evaluation(self):
        assert phi_center_sq(AR) == pytest.approx(float(phi_eval(0.0, AR)) ** 2, abs=1e-10)

    def test_regime_error_outside_ar(self):
        with pytest.raises(RegimeError):
            phi_center_sq(AA)

    def test_root_of_center_polynomial(self):
        # phi(0) must be a zero of Z^2 s^2/8 + omega s^2/2 + l1 s^4/4 + l2 s^6/6.
        p = validate_params(2.0, -1.0, -0.5, 0.5)
        s = math.sqrt(phi_center_sq(p))
        value = (p.z**2 / 8.0 + p.omega / 2.0) * s**2 + p.lambda1 * s**4 / 4.0 + p.lambda2 * s**6 / 6.0
        assert abs(value) < 1e-10

    def test_vanishes_at_frequency_floor(self):
        # As -omega approaches Z^2/4 the center value goes to zero.
        values = [phi_center_sq(validate_params(2.0, -1.0, omega, 1.0))
                  for omega in (-0.30, -0.27, -0.2501)]
        assert values[0] > values[1] > values[2]
        assert values[2] < 4e-4


@given(
    omega=st.floats(-20.0, -0.5),
    z_frac=st.floats(-0.95, 0.95),
    x=st.floats(-15.0, 15.0),
)
@settings(max_examples=80, deadline=None)
def test_profile_properties_attractive_attractive(omega, z_frac, x):
    """Positivity, evenness, and the ODE residual over random admissible points."""
    p = validate_params(1.0, 1.0, omega, z_frac * 2.0 * math.sqrt(-omega))
    value = float(phi_eval(x, p))
    assert value > 0.0
    assert float(phi_eval(-x, p)) == value
    if x != 0.0:
        assert abs(float(ode_residual(x, p))) < 1e-10 * max(1.0, value)
    assert abs(jump_defect(p)) < 1e-12
