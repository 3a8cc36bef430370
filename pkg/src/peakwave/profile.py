"""Closed-form peak standing-wave profiles for the cubic-quintic NLS with a
point defect at the origin.

The wave is u(x, t) = e^{-i omega t} phi(x) with a real, even, exponentially
decaying profile.  Away from the defect phi solves

    phi'' + omega*phi + lambda1*phi^3 + lambda2*phi^5 = 0,

and at x = 0 it carries the derivative jump phi'(0+) - phi'(0-) = -Z*phi(0).
The profile is an absolute-value translate of the defect-free solution; the
translation is fixed through the inverse of an odd increasing diffeomorphism
r_map : R -> (-1, 1), evaluated at Z / (2*sqrt(-omega)).

Two parameter regimes admit such waves: cubic and quintic both focusing
(attractive-attractive), and focusing cubic with defocusing quintic
(attractive-repulsive), the latter on a bounded frequency window.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeError

__all__ = [
    "Regime",
    "Side",
    "WaveParameters",
    "ProfileEvaluator",
    "validate_params",
    "r_map",
    "r_inverse",
    "phi_eval",
    "phi_derivative",
    "ode_residual",
    "jump_defect",
    "phi_center_sq",
]


class Regime(enum.Enum):
    ATTRACTIVE_ATTRACTIVE = "attractive-attractive"
    ATTRACTIVE_REPULSIVE = "attractive-repulsive"


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class WaveParameters:
    """Validated parameter tuple (lambda1, lambda2, omega, z) with its regime."""

    lambda1: float
    lambda2: float
    omega: float
    z: float
    regime: Regime


def validate_params(lambda1: float, lambda2: float, omega: float, z: float) -> WaveParameters:
    """Check the admissibility inequalities and tag the regime.

    Raises :class:`RegimeError` naming the first violated inequality.  All
    inequalities are strict: boundary parameter values are rejected.
    """
    lambda1 = float(lambda1)
    lambda2 = float(lambda2)
    omega = float(omega)
    z = float(z)
    if not lambda1 > 0.0:
        raise RegimeError(f"cubic coefficient must satisfy lambda1 > 0, got {lambda1}")
    if lambda2 == 0.0 or not math.isfinite(lambda2):
        raise RegimeError(f"quintic coefficient must be nonzero and finite, got {lambda2}")
    if not (-omega > z * z / 4.0):
        raise RegimeError(
            f"-omega > Z^2/4 violated: -omega = {-omega}, Z^2/4 = {z * z / 4.0}"
        )
    if lambda2 > 0.0:
        return WaveParameters(lambda1, lambda2, omega, z, Regime.ATTRACTIVE_ATTRACTIVE)
    upper = -3.0 * lambda1 * lambda1 / (16.0 * lambda2)
    if not (-omega < upper):
        raise RegimeError(
            f"-omega < -3*lambda1^2/(16*lambda2) violated: -omega = {-omega}, bound = {upper}"
        )
    z_bound = math.sqrt(3.0) * lambda1 / (2.0 * math.sqrt(-lambda2))
    if not (abs(z) < z_bound):
        raise RegimeError(
            f"|Z| < sqrt(3)*lambda1/(2*sqrt(-lambda2)) violated: |Z| = {abs(z)}, bound = {z_bound}"
        )
    return WaveParameters(lambda1, lambda2, omega, z, Regime.ATTRACTIVE_REPULSIVE)


def _coefficients(p: WaveParameters) -> tuple[float, float, float, float]:
    """(alpha, beta, kappa, nu) with alpha = lambda1/4, beta = lambda2/3,
    kappa = sqrt(alpha^2 - beta*omega), nu = sqrt(-omega)."""
    alpha = p.lambda1 / 4.0
    beta = p.lambda2 / 3.0
    kappa_sq = alpha * alpha - beta * p.omega
    # In the admissible set kappa_sq > 0 (the AR upper bound enforces it).
    kappa = math.sqrt(kappa_sq)
    nu = math.sqrt(-p.omega)
    return alpha, beta, kappa, nu


_ONE_INSIDE = float(np.nextafter(1.0, 0.0))


def _r_raw(arg, alpha: float, kappa: float):
    """R evaluated at hyperbolic argument arg = 2*nu*s, overflow-safe.

    R = kappa*sinh(arg) / (alpha + kappa*cosh(arg)); numerator and denominator
    are rescaled by e^{-|arg|} so large arguments cannot overflow.  The result
    is clamped one ulp inside +-1: the clamp only engages when the true value
    is within an ulp of the boundary, and it keeps the open range (-1, 1) of
    the exact map valid in float semantics (r_inverse stays total on outputs).
    """
    arg = np.asarray(arg, dtype=float)
    t = np.abs(arg)
    em = np.exp(-t)
    num = np.sign(arg) * kappa * 0.5 * (1.0 - em * em)
    den = alpha * em + kappa * 0.5 * (1.0 + em * em)
    return np.clip(num / den, -_ONE_INSIDE, _ONE_INSIDE)


def _r_prime_raw(arg, alpha: float, kappa: float, nu: float):
    """dR/ds at hyperbolic argument arg = 2*nu*s, overflow-safe."""
    arg = np.asarray(arg, dtype=float)
    t = np.abs(arg)
    em = np.exp(-t)
    # R'(s) = 2*nu*kappa*(alpha*cosh + kappa) / (alpha + kappa*cosh)^2,
    # with numerator and denominator scaled by e^{-2|arg|}.
    num = 2.0 * nu * kappa * (alpha * 0.5 * (1.0 + em * em) * em + kappa * em * em)
    den = (alpha * em + kappa * 0.5 * (1.0 + em * em)) ** 2
    return num / den


def r_map(s, p: WaveParameters):
    """Odd increasing diffeomorphism R -> (-1, 1) that fixes the profile shift."""
    alpha, _, kappa, nu = _coefficients(p)
    return _r_raw(2.0 * nu * np.asarray(s, dtype=float), alpha, kappa)


def _r_inverse_raw(y: float, alpha: float, kappa: float, nu: float) -> float:
    # With t = tanh(nu*s) the definition becomes the quadratic
    #   y*(kappa - alpha)*t^2 - 2*kappa*t + y*(alpha + kappa) = 0,
    # whose root in (-1, 1) is, in the cancellation-free form,
    #   t = y*(alpha + kappa) / (kappa + sqrt(kappa^2 - y^2*(kappa^2 - alpha^2))).
    disc = kappa * kappa - y * y * (kappa * kappa - alpha * alpha)
    t = y * (alpha + kappa) / (kappa + math.sqrt(disc))
    return math.atanh(t) / nu


def r_inverse(y: float, p: WaveParameters) -> float:
    """Inverse of :func:`r_map`, computed in closed form (no iteration)."""
    y = float(y)
    if not abs(y) < 1.0:
        raise DomainError(f"r_inverse requires |y| < 1, got {y}")
    alpha, _, kappa, nu = _coefficients(p)
    return _r_inverse_raw(y, alpha, kappa, nu)


@dataclass(frozen=True)
class ProfileEvaluator:
    """Profile phi, its one-sided derivatives, and the derived constants.

    phi(x) = [alpha/(-omega) + kappa/(-omega) * cosh(2*nu*(|x| + b))]^{-1/2},
    where b = shift_b has the sign of Z.  All evaluations accept scalars or
    numpy arrays and are overflow-safe for arbitrarily large |x|.
    """

    params: WaveParameters
    alpha: float
    beta: float
    kappa: float
    root_minus_omega: float
    shift_b: float

    @classmethod
    def from_params(cls, p: WaveParameters) -> "ProfileEvaluator":
        alpha, beta, kappa, nu = _coefficients(p)
        b = _r_inverse_raw(p.z / (2.0 * nu), alpha, kappa, nu)
        return cls(p, alpha, beta, kappa, nu, b)

    def _arg(self, x):
        return 2.0 * self.root_minus_omega * (np.abs(np.asarray(x, dtype=float)) + self.shift_b)

    def value(self, x):
        """phi(x); even in x, strictly positive, decaying like e^{-nu*|x|}."""
        a = self._arg(x)
        t = np.abs(a)
        em = np.exp(-t)
        phi_sq = (-self.params.omega) * em / (
            self.alpha * em + 0.5 * self.kappa * (1.0 + em * em)
        )
        return np.sqrt(phi_sq)

    def slope_factor(self, x):
        """-phi'(x)/phi(x) for x > 0, i.e. nu * R(|x| + b)."""
        return self.root_minus_omega * _r_raw(self._arg(x), self.alpha, self.kappa)

    def derivative(self, x, side: Side = Side.RIGHT):
        """One-sided derivative; `side` only matters at x = 0."""
        x_arr = np.asarray(x, dtype=float)
        sign = np.sign(x_arr)
        side_sign = 1.0 if side is Side.RIGHT else -1.0
        sign = np.where(x_arr == 0.0, side_sign, sign)
        return -sign * self.slope_factor(x_arr) * self.value(x_arr)

    def second_derivative(self, x):
        """phi''(x) for x != 0 by differentiating the closed form once more."""
        x_arr = np.asarray(x, dtype=float)
        a = self._arg(x_arr)
        nu = self.root_minus_omega
        r = _r_raw(a, self.alpha, self.kappa)
        rp = _r_prime_raw(a, self.alpha, self.kappa, nu)
        phi = self.value(x_arr)
        return (-nu * rp + (nu * r) ** 2) * phi


def phi_eval(x, p: WaveParameters):
    """Profile value phi(x)."""
    return ProfileEvaluator.from_params(p).value(x)


def phi_derivative(x, side: Side, p: WaveParameters):
    """One-sided analytic derivative of the profile."""
    return ProfileEvaluator.from_params(p).derivative(x, side)


def ode_residual(x: float, p: WaveParameters) -> float:
    """phi'' + omega*phi + lambda1*phi^3 + lambda2*phi^5 at x != 0.

    Vanishes identically for the exact profile; the returned value measures
    only floating-point error of the closed forms.
    """
    if np.any(np.asarray(x) == 0.0):
        raise DomainError("ode_residual is defined off the defect (x != 0)")
    ev = ProfileEvaluator.from_params(p)
    phi = ev.value(x)
    return ev.second_derivative(x) + p.omega * phi + p.lambda1 * phi**3 + p.lambda2 * phi**5


def jump_defect(p: WaveParameters) -> float:
    """phi'(0+) - phi'(0-) + Z*phi(0); zero up to rounding by construction."""
    ev = ProfileEvaluator.from_params(p)
    right = float(ev.derivative(0.0, Side.RIGHT))
    left = float(ev.derivative(0.0, Side.LEFT))
    return right - left + p.z * float(ev.value(0.0))


def phi_center_sq(p: WaveParameters) -> float:
    """Closed-form phi(0)^2 in the attractive-repulsive regime.

    phi(0)^2 solves the quadratic obtained from the first integral combined
    with the derivative jump; the admissible root is

        (-3*lambda1/(4*lambda2)) * (1 - sqrt(1 - (16*lambda2/(3*lambda1^2))*(omega + Z^2/4))).
    """
    if p.regime is not Regime.ATTRACTIVE_REPULSIVE:
        raise RegimeError("phi_center_sq closed form applies to the attractive-repulsive regime; "
                          "use phi_eval(0)**2 otherwise")
    inner = 1.0 - (16.0 * p.lambda2 / (3.0 * p.lambda1**2)) * (p.omega + p.z * p.z / 4.0)
    return (-3.0 * p.lambda1 / (4.0 * p.lambda2)) * (1.0 - math.sqrt(inner))
