"""Correlation radii, latent heat and critical exponents from formation times.

Exponents are exact :class:`fractions.Fraction` values, obtained from
``nu = 2/3`` and ``beta = 1/3`` through the Josephson, Rushbrooke, Widom and
Fisher scaling relations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InconsistentRelations, MissingParameter

#: Classical electron radius, cm.
R0_CLASSICAL_CM = 2.8179403262e-13
#: Avogadro constant, 1/mol.
AVOGADRO = 6.02214076e23

NU = Fraction(2, 3)
BETA = Fraction(1, 3)


@dataclass(frozen=True)
class CriticalSpec:
    T_c: float
    theta: float
    R0: float = 1.0
    latent_molar: float | None = None
    avogadro: float = AVOGADRO
    dimension_d: int = 3
    r0_classical: float = R0_CLASSICAL_CM

    def __post_init__(self):
        if not self.T_c > 0:
            raise DomainError("T_c must be > 0")
        if not self.theta > 0:
            raise DomainError("theta must be > 0")

    @property
    def reference_dimension(self) -> bool:
        """True when the exponent claims apply as stated (``d = 3``)."""
        return self.dimension_d == 3


class InteractionVolume(NamedTuple):
    V_c: float
    X: float
    saturated: bool


class EmRadius(NamedTuple):
    R_gamma: float
    lambda_coefficient: float


class LatentHeat(NamedTuple):
    W: float
    W_base: float


class GLCoefficients(NamedTuple):
    A: float
    B: float
    eta_eq: float


@dataclass(frozen=True)
class ExponentSet:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction
    nu: Fraction
    eta: Fraction
    dimension_d: int

    @property
    def reference_dimension(self) -> bool:
        return self.dimension_d == 3

    def as_dict(self):
        return {k: getattr(self, k) for k in ("alpha", "beta", "gamma", "delta", "nu", "eta")}

    def check(self):
        """Residuals of the four scaling relations (all exactly zero)."""
        d = self.dimension_d
        return {
            "josephson": d * self.nu - (2 - self.alpha),
            "rushbrooke": self.alpha + 2 * self.beta + self.gamma - 2,
            "widom": self.gamma - self.beta * (self.delta - 1),
            "fisher": self.gamma - self.nu * (2 - self.eta),
        }


def interaction_volume(tau2, sigma_tot, density_N=0.0, c=1.0) -> InteractionVolume:
    """Volume swept during formation, ``V_c = c*|tau2|*sigma``, and filling ``X = N*V_c``."""
    if not sigma_tot >= 0:
        raise DomainError("sigma_tot must be >= 0")
    v = c * abs(tau2) * sigma_tot
    x = density_N * v
    return InteractionVolume(v, x, x >= 1.0)


def em_correlation_radius(omega, r0_classical=R0_CLASSICAL_CM, c=2.99792458e10) -> EmRadius:
    """Radius of electromagnetic correlation ``(3 c^2 r0)^(1/3) * omega^(-2/3)``.

    Also returns the coefficient of the wavelength form
    ``R = coef * lambda^(2/3)``, ``coef = (3 r0)^(1/3) (2 pi)^(-2/3)``.
    """
    if not omega > 0:
        raise DomainError("omega must be > 0")
    r = (3.0 * c * c * r0_classical) ** (1.0 / 3.0) * omega ** (-2.0 / 3.0)
    return EmRadius(r, (3.0 * r0_classical) ** (1.0 / 3.0) * (2.0 * math.pi) ** (-2.0 / 3.0))


def em_correlation_radius_wavelength(lambda_w, r0_classical=R0_CLASSICAL_CM) -> float:
    """Wavelength form of :func:`em_correlation_radius`."""
    if not lambda_w > 0:
        raise DomainError("lambda_w must be > 0")
    coef = (3.0 * r0_classical) ** (1.0 / 3.0) * (2.0 * math.pi) ** (-2.0 / 3.0)
    return coef * lambda_w ** (2.0 / 3.0)


def thermal_correlation_radius(theta, R0=1.0):
    """``R_c = R0 * theta**(-2/3)``; accepts scalars or arrays."""
    t = np.asarray(theta, dtype=float)
    if np.any(t <= 0):
        raise DomainError("theta must be > 0 (R_c diverges at criticality)")
    out = R0 * t ** (-2.0 / 3.0)
    return float(out) if out.ndim == 0 else out


def latent_heat_per_particle(spec: CriticalSpec, kind="first_order", mean_C=None) -> LatentHeat:
    """Latent energy per particle, linear in ``theta``.

    ``first_order``: ``W_base = latent_molar/N_A``; ``second_order``:
    ``W_base = mean_C*T_c/N_A``. In both cases ``W = W_base*theta``.
    """
    if kind == "first_order":
        if spec.latent_molar is None or not spec.latent_molar > 0:
            raise MissingParameter("first_order needs latent_molar > 0")
        base = spec.latent_molar / spec.avogadro
    elif kind == "second_order":
        if mean_C is None or not mean_C > 0:
            raise MissingParameter("second_order needs mean_C > 0")
        base = mean_C * spec.T_c / spec.avogadro
    else:
        raise DomainError(f"unknown kind {kind!r}")
    return LatentHeat(base * spec.theta, base)


def exponent_set(dimension_d=3) -> ExponentSet:
    """Critical exponents from ``nu = 2/3`` and ``beta = 1/3`` via scaling relations."""
    if int(dimension_d) != dimension_d or dimension_d < 2:
        raise DomainError("dimension_d must be an integer >= 2")
    d = int(dimension_d)
    alpha = 2 - d * NU
    gamma = 2 - alpha - 2 * BETA
    if gamma <= 0:
        raise InconsistentRelations(f"gamma = {gamma} <= 0 for d = {d}")
    delta = 1 + gamma / BETA
    eta = 2 - gamma / NU
    out = ExponentSet(alpha, BETA, gamma, delta, NU, eta, d)
    if any(v != 0 for v in out.check().values()):
        raise InconsistentRelations(f"scaling relations inconsistent for d = {d}")
    return out


def gl_coefficients(theta, a_coeff=1.0, b_coeff=1.0, R0=1.0) -> GLCoefficients:
    """Landau expansion coefficients from the correlation radius.

    ``theta`` is signed: negative means the ordered side. ``A = a*sgn(theta)/R_c^2``,
    ``B = b/R_c``; the equilibrium order parameter is ``sqrt(-A/(2B))`` when
    ``A < 0``. At ``theta = 0`` all three vanish.
    """
    if not b_coeff > 0:
        raise DomainError("b_coeff must be > 0")
    if theta == 0:
        return GLCoefficients(0.0, 0.0, 0.0)
    rc = thermal_correlation_radius(abs(theta), R0)
    A = a_coeff * math.copysign(1.0, theta) / (rc * rc)
    B = b_coeff / rc
    eta = math.sqrt(-A / (2.0 * B)) if A < 0 else 0.0
    return GLCoefficients(A, B, eta)
