"""One-loop running coupling, formation durations and the causality bound.

The asymptotic propagator ``D = (4 pi/k^2) / (1 + eta_c ln(Lambda^2/k^2))`` with
``eta_c = beta*alpha_c/(4 pi)`` yields a formation time whose non-negativity
limits ``alpha <= 4 pi/beta`` for ``beta >= 0``. For ``beta < 0`` the same
requirement instead caps the cutoff at a finite scale ``Lambda_w``.
Natural units throughout; ``k_sq`` is the squared momentum magnitude,
positive for spacelike momenta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .errors import AtPole, DenominatorCollapse, DomainError

#: Relative distance to the Landau pole treated as "at the pole".
POLE_TOL = 1e-12

#: Default electromagnetic census coupling: alpha(m_Z) * sin^2(theta_W) with
#: alpha(m_Z) = 1/128 and sin^2(theta_W) = 0.23 (standard values).
ALPHA_EM_CENSUS = 0.23 / 128.0
ALPHA_STRONG = 0.12
ALPHA_WEAK = 1.0 / 171.0


@dataclass(frozen=True)
class CouplingSpec:
    alpha: float
    beta_coeff: float = 0.0
    nu_factor: float = 1.0
    mass_m: float = 1.0
    cutoff_Lambda: float = 1.0
    k_scale: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be > 0")
        if not self.mass_m > 0:
            raise DomainError("mass_m must be > 0")
        if not self.cutoff_Lambda >= self.mass_m:
            raise DomainError("cutoff_Lambda must be >= mass_m")
        if not self.k_scale > 0:
            raise DomainError("k_scale must be > 0")

    @property
    def log_ratio(self):
        """``ln(Lambda^2/k^2)``."""
        return 2.0 * math.log(self.cutoff_Lambda / self.k_scale)

    @property
    def eta_c(self):
        return self.beta_coeff * self.alpha / (4.0 * math.pi)


class BareCoupling(NamedTuple):
    alpha_c: float
    landau_pole: Optional[float]


class FormationTau(NamedTuple):
    tau1: float
    tau2: float


class Verdict(NamedTuple):
    label: str
    alpha: float
    beta: float
    branch: str
    bound: float
    passes: bool
    note: str


class WeakScale(NamedTuple):
    ln_ratio: float
    Lambda_w: float
    R_w: float


class Census(NamedTuple):
    verdicts: tuple
    summary: str


def bare_coupling(spec: CouplingSpec) -> BareCoupling:
    """``alpha_c = alpha / (1 - nu*alpha*ln(Lambda^2/k^2))`` and the Landau pole.

    The pole ``k*exp(1/(2 nu alpha))`` is reported when ``nu*alpha > 0``;
    it saturates to infinity when the exponent overflows.
    """
    na = spec.nu_factor * spec.alpha
    den = 1.0 - na * spec.log_ratio
    if abs(den) <= POLE_TOL:
        raise AtPole(f"denominator {den:.3g} at the Landau pole")
    pole = None
    if na > 0:
        expo = 1.0 / (2.0 * na)
        pole = spec.k_scale * math.exp(expo) if expo < 700.0 else math.inf
    return BareCoupling(spec.alpha / den, pole)


def physical_coupling(alpha_c, nu_factor, log_ratio):
    """Inverse of :func:`bare_coupling`: ``alpha = alpha_c / (1 + nu*alpha_c*ln)``."""
    den = 1.0 + nu_factor * alpha_c * log_ratio
    if abs(den) <= POLE_TOL:
        raise AtPole(f"denominator {den:.3g} is singular")
    return alpha_c / den


def formation_tau(k0, k_sq, eta_c, cutoff_Lambda=None, with_log=True) -> FormationTau:
    """Delay (zero) and formation time of the running-coupling propagator.

    ``with_log``: ``tau2 = (2 k0/k^2) [1 - eta_c/(1 + eta_c ln(Lambda^2/k^2))]``.
    Otherwise the simplified ``(2 k0/k^2)(1 - eta_c)``.
    """
    if k_sq == 0:
        raise DomainError("k_sq must be nonzero")
    tau0 = 2.0 * k0 / k_sq
    if not with_log:
        return FormationTau(0.0, tau0 * (1.0 - eta_c))
    if cutoff_Lambda is None:
        raise DomainError("cutoff_Lambda is required with_log")
    if math.isinf(cutoff_Lambda):
        return FormationTau(0.0, tau0)
    den = 1.0 + eta_c * (2.0 * math.log(cutoff_Lambda) - math.log(abs(k_sq)))
    if den <= 0:
        raise DenominatorCollapse(f"1 + eta_c*ln(Lambda^2/k^2) = {den:.3g} <= 0")
    return FormationTau(0.0, tau0 * (1.0 - eta_c / den))


def weak_scale(alpha, beta_coeff, mass_m=1.0, compton=1.0) -> WeakScale:
    """Finite cutoff allowed for a negative beta coefficient.

    ``ln(Lambda_w/m) = (|eta_c| + 1)/(2 |eta_c|)``, ``Lambda_w = m e^ln``,
    ``R_w = compton e^-ln``. ``Lambda_w`` saturates to infinity for
    vanishing ``eta_c``.
    """
    if not beta_coeff < 0:
        raise DomainError("weak_scale needs beta_coeff < 0")
    if not alpha > 0:
        raise DomainError("alpha must be > 0")
    e = abs(beta_coeff * alpha / (4.0 * math.pi))
    ln = (e + 1.0) / (2.0 * e)
    scale = math.exp(ln) if ln < 700.0 else math.inf
    return WeakScale(ln, mass_m * scale, compton / scale)


def causality_verdict(alpha, beta_coeff, label="", abelian=False) -> Verdict:
    """Check a coupling against the non-negative formation-time requirement.

    ``beta >= 0``: passes iff ``alpha <= 4 pi/beta`` (equality passes; the
    bound is infinite for ``beta = 0``). ``beta < 0``: the requirement
    becomes a finite cutoff ``Lambda_w``, which is reported as the bound.
    A non-abelian coupling is then consistent below ``Lambda_w``; an abelian
    one, whose coupling grows with energy and needs ``beta > 0`` to be
    screened, is flagged as contradicting the bound.
    """
    if not alpha > 0:
        raise DomainError("alpha must be > 0")
    if beta_coeff >= 0:
        bound = math.inf if beta_coeff == 0 else 4.0 * math.pi / beta_coeff
        ok = alpha <= bound
        note = "alpha <= 4pi/beta" if ok else "alpha exceeds 4pi/beta"
        return Verdict(label, alpha, beta_coeff, "positive_beta", bound, ok, note)
    ws = weak_scale(alpha, beta_coeff)
    if abelian:
        return Verdict(label, alpha, beta_coeff, "negative_beta", ws.ln_ratio, False,
                       "negative beta for an abelian coupling contradicts alpha <= 4pi/beta")
    return Verdict(label, alpha, beta_coeff, "negative_beta", ws.ln_ratio, True,
                   "consistent below Lambda_w; bound is ln(Lambda_w/m)")


_ABELIAN_LABELS = {"em", "electromagnetic", "qed", "u1"}

PRESETS = {
    "three-family": (
        ("strong", ALPHA_STRONG, 7.0, False),
        ("em", ALPHA_EM_CENSUS, 10.0 / 3.0, True),
        ("weak", ALPHA_WEAK, -4.0, False),
    ),
    "susy": (
        ("strong", ALPHA_STRONG, 3.0, False),
        ("em", ALPHA_EM_CENSUS, -1.0, True),
        ("weak", ALPHA_WEAK, -33.0 / 5.0, False),
    ),
}


def fermion_census(entries: Sequence) -> Census:
    """Apply :func:`causality_verdict` to ``(label, alpha, beta[, abelian])`` entries.

    When ``abelian`` is omitted it is inferred from the label. The summary is
    ``"conforms"`` if every entry passes and ``"overcrowded"`` otherwise.
    """
    entries = list(entries)
    if not entries:
        raise DomainError("census needs at least one entry")
    out = []
    for e in entries:
        label, alpha, beta = e[0], float(e[1]), float(e[2])
        abelian = bool(e[3]) if len(e) > 3 else str(label).lower() in _ABELIAN_LABELS
        out.append(causality_verdict(alpha, beta, label, abelian))
    summary = "conforms" if all(v.passes for v in out) else "overcrowded"
    return Census(tuple(out), summary)


def froissart_tau_bound(s, m_target=1.0, sigma_const=1.0):
    """Upper bound ``4 m ln(s)/s`` on the formation time for ``sigma <= C ln^2 s``, ``s = 2 m E``.

    ``sigma_const`` drops out of the logarithmic derivative and is accepted
    only for interface symmetry.
    """
    if not s > 1:
        raise DomainError("s must be > 1")
    return 4.0 * m_target * math.log(s) / s
