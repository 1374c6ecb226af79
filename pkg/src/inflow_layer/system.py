"""Planar autonomous vector field of the layer equations.

The field is provided in two algebraically identical forms: the integrated
rational form (valid for u > 0, where the specific volume V = (v+/u+) u is
positive) and the exact polynomial expansion around the far-field
equilibrium S1 = (u+, theta+).  The expansion is exact, not truncated, so
the two forms agree to rounding error wherever both are defined; the
polynomial form is additionally defined on the whole plane and is the one
handed to the integrator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .gas import EndState, GasParams, mach


@dataclass(frozen=True)
class PhasePoint:
    """A point (u, theta) in the phase plane."""

    u: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.theta)):
            raise ValueError(f"phase point must be finite, got ({self.u}, {self.theta})")

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.theta], dtype=float)


@dataclass(frozen=True)
class SystemData:
    """Immutable bundle of constants defining one instance of the field.

    A11..A22 are the entries of the linearization at S1; alpha1, alpha2 are
    the coordinates of the secondary equilibrium S2 = (alpha1 u+, alpha2
    theta+) relative to the far field.  sigma_minus is the boundary moving
    speed -u+/v+ implied by the mass-flux condition.
    """

    gas: GasParams
    v_plus: float
    u_plus: float
    theta_plus: float
    sigma_minus: float
    p_plus: float
    mach_plus: float
    A11: float
    A12: float
    A21: float
    A22: float
    alpha1: float
    alpha2: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.A11, self.A12], [self.A21, self.A22]])

    @property
    def det_A(self) -> float:
        return self.A11 * self.A22 - self.A12 * self.A21

    @property
    def tr_A(self) -> float:
        return self.A11 + self.A22

    @property
    def origin(self) -> PhasePoint:
        return PhasePoint(0.0, 0.0)

    @property
    def s1(self) -> PhasePoint:
        return PhasePoint(self.u_plus, self.theta_plus)

    @property
    def s2(self) -> PhasePoint:
        return PhasePoint(self.alpha1 * self.u_plus, self.alpha2 * self.theta_plus)

    @property
    def scale(self) -> float:
        return max(self.u_plus, self.theta_plus)

    def equilibria(self) -> tuple[PhasePoint, PhasePoint, PhasePoint]:
        return (self.origin, self.s1, self.s2)


def build_system(gas: GasParams, right: EndState) -> SystemData:
    """Assemble SystemData from the gas constants and the far-field state.

    The field is only defined for positive far-field velocity.
    """
    if right.u <= 0.0:
        raise DomainError(f"far-field velocity must be positive, got {right.u}")
    g, R, mu, kappa = gas.gamma, gas.R, gas.mu, gas.kappa
    up, tp, vp = right.u, right.theta, right.v
    m2g = up * up / (R * tp)  # Mach^2 * gamma
    mach_plus = mach(right, gas)
    a11 = (m2g - 1.0) * up / (m2g * mu)
    a12 = R / mu
    a21 = R * tp / kappa  # simplified form of u+^2 / (M+^2 gamma kappa)
    a22 = R * up / (kappa * (g - 1.0))
    m2 = mach_plus * mach_plus
    alpha1 = (m2 * g - m2 + 2.0) / (m2 * (g + 1.0))
    alpha2 = 1.0 - 2.0 * (1.0 - m2) * (m2 * g + 1.0) * (g - 1.0) / (m2 * (g + 1.0) ** 2)
    return SystemData(
        gas=gas, v_plus=vp, u_plus=up, theta_plus=tp,
        sigma_minus=-up / vp, p_plus=R * tp / vp, mach_plus=mach_plus,
        A11=a11, A12=a12, A21=a21, A22=a22, alpha1=alpha1, alpha2=alpha2,
    )


def field_exact(u, theta, s: SystemData):
    """Integrated rational form of the field, vectorized over (u, theta).

    Requires u > 0 elementwise (the form divides by V = (v+/u+) u).
    Returns (du_dxi, dtheta_dxi) with the same shape as the inputs.
    """
    u = np.asarray(u, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(u <= 0.0):
        raise DomainError("rational form requires u > 0")
    gas = s.gas
    V = (s.v_plus / s.u_plus) * u
    du = u - s.u_plus
    dth = theta - s.theta_plus
    rhs_u = (V / gas.mu) * (-s.sigma_minus * du
                            + gas.R * (theta / V - s.theta_plus / s.v_plus))
    rhs_th = (V / gas.kappa) * (-s.sigma_minus * gas.R / (gas.gamma - 1.0) * dth
                                + s.p_plus * du + 0.5 * s.sigma_minus * du * du)
    return rhs_u, rhs_th


def field_poly(u, theta, s: SystemData):
    """Exact polynomial form of the field, vectorized over (u, theta).

    Valid on the whole plane, including u <= 0.
    """
    u = np.asarray(u, dtype=float)
    theta = np.asarray(theta, dtype=float)
    gas = s.gas
    du = u - s.u_plus
    dth = theta - s.theta_plus
    f1 = du * du / gas.mu
    c_sq = gas.R * s.theta_plus / (gas.kappa * s.u_plus) - s.u_plus / (2.0 * gas.kappa)
    c_mix = gas.R / (gas.kappa * (gas.gamma - 1.0))
    f2 = c_sq * du * du + c_mix * du * dth - du ** 3 / (2.0 * gas.kappa)
    rhs_u = s.A11 * du + s.A12 * dth + f1
    rhs_th = s.A21 * du + s.A22 * dth + f2
    return rhs_u, rhs_th


def rhs_exact(p: PhasePoint, s: SystemData) -> tuple[float, float]:
    """Phase velocity (U', Theta') at p from the rational form; needs p.u > 0."""
    fu, fth = field_exact(p.u, p.theta, s)
    return float(fu), float(fth)


def rhs_poly(p: PhasePoint, s: SystemData) -> tuple[float, float]:
    """Phase velocity (U', Theta') at p from the polynomial form."""
    fu, fth = field_poly(p.u, p.theta, s)
    return float(fu), float(fth)


def jacobian(p: PhasePoint, s: SystemData) -> np.ndarray:
    """Exact Jacobian of the polynomial field at p.

    At S1 this equals the matrix A; at S2 it is the linearization of the
    field around the secondary equilibrium.
    """
    gas = s.gas
    du = p.u - s.u_plus
    dth = p.theta - s.theta_plus
    c_sq = gas.R * s.theta_plus / (gas.kappa * s.u_plus) - s.u_plus / (2.0 * gas.kappa)
    c_mix = gas.R / (gas.kappa * (gas.gamma - 1.0))
    return np.array([
        [s.A11 + 2.0 * du / gas.mu, s.A12],
        [s.A21 + 2.0 * c_sq * du + c_mix * dth - 1.5 * du * du / gas.kappa,
         s.A22 + c_mix * du],
    ])


def nullcline_h1(u, s: SystemData):
    """Temperature on the U' = 0 nullcline at velocity u (vectorized)."""
    u = np.asarray(u, dtype=float)
    m2g = s.u_plus * s.u_plus / (s.gas.R * s.theta_plus)
    return -(u - s.u_plus) * (u - s.u_plus / m2g) / s.gas.R + s.theta_plus


def nullcline_h2(u, s: SystemData):
    """Temperature on the Theta' = 0 nullcline at velocity u (vectorized).

    The Theta' = 0 locus also contains the line u = 0; this function returns
    the parabolic branch.
    """
    u = np.asarray(u, dtype=float)
    m2g = s.u_plus * s.u_plus / (s.gas.R * s.theta_plus)
    return ((s.gas.gamma - 1.0) / (2.0 * s.gas.R)
            * (u - s.u_plus) * (u - (m2g + 2.0) * s.u_plus / m2g)
            + s.theta_plus)


def phase_field(s: SystemData):
    """Polynomial field wrapped in the (xi, y) -> array signature integrators use."""

    def fun(_xi, y):
        fu, fth = field_poly(y[0], y[1], s)
        return np.array([float(fu), float(fth)])

    return fun


class Region(enum.Enum):
    """Open nullcline-bounded regions on either side of S1."""

    REGION_I = "region_1"
    REGION_II = "region_2"


def region_contains(p: PhasePoint, which: Region, s: SystemData) -> bool:
    """Membership test for the open regions bounded by the nullclines.

    Region I sits on 0 < u < u+, Region II on u+ < u < alpha1 u+.  Which of
    the two nullclines bounds from above swaps between the regions, so
    membership uses the sign test (theta - h1)(theta - h2) < 0 instead of a
    fixed upper/lower assignment.
    """
    if which is Region.REGION_II:
        if not s.mach_plus < 1.0:
            raise DomainError("Region II exists only in the subsonic regime")
        if not s.u_plus < p.u < s.alpha1 * s.u_plus:
            return False
    elif which is Region.REGION_I:
        if not 0.0 < p.u < s.u_plus:
            return False
    else:
        raise ValueError(f"unknown region {which!r}")
    d1 = p.theta - float(nullcline_h1(p.u, s))
    d2 = p.theta - float(nullcline_h2(p.u, s))
    return d1 * d2 < 0.0
