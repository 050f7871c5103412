"""Temporal functions tau = tau1 + i*tau2 = (d/(i d omega)) ln S(omega).

``tau1`` (real part, the phase derivative) is the delay a scattered
particle spends held by the scatterer; ``tau2`` (imaginary part, the
derivative of ln|S|) is the formation or "dressing" time of the outgoing
state. Negative ``tau2`` marks an instantaneous jump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import special

from . import response_models as rm
from ._numerics import default_step, derivative, richardson_derivative
from .errors import DomainError, PhaseJump, PoleHit, ResolventSingular, ZeroResponse

#: Magnitude guard below which ``ln|S|`` is considered undefined.
ZERO_GUARD = 1e-300


@dataclass(frozen=True, eq=False)
class TemporalFunction:
    """Grid-aligned delay and formation times.

    Pole-adjacent samples are *masked*: their ``tau1``/``tau2`` entries are
    set to zero and ``masked`` is True, so all stored values are finite.
    ``max_phase_step`` reports the largest wrapped phase increment seen when
    the function came from sampled data (an undersampling diagnostic).
    """

    omega: np.ndarray
    tau1: np.ndarray
    tau2: np.ndarray
    masked: np.ndarray = None
    max_phase_step: Optional[float] = None

    def __post_init__(self):
        arrays = [np.asarray(a, dtype=float) for a in (self.omega, self.tau1, self.tau2)]
        masked = (np.zeros(arrays[0].shape, dtype=bool) if self.masked is None
                  else np.asarray(self.masked, dtype=bool))
        if not all(a.shape == arrays[0].shape for a in arrays[1:] + [masked]):
            raise ValueError("omega, tau1, tau2, masked must have equal shapes")
        for a in arrays[1:]:
            if not np.all(np.isfinite(a)):
                raise ValueError("temporal function entries must be finite; mask poles instead")
        for name, a in zip(("omega", "tau1", "tau2"), arrays):
            a.flags.writeable = False
            object.__setattr__(self, name, a)
        masked.flags.writeable = False
        object.__setattr__(self, "masked", masked)

    def __len__(self):
        return self.omega.size

    @property
    def tau(self):
        return self.tau1 + 1j * self.tau2


class SingularDelay(NamedTuple):
    """Delta-function delay ``weight * delta(omega - omega_at)``."""

    omega_at: float
    weight: float


class RenormalizedTau(NamedTuple):
    closed: float
    series: float
    tail: float
    terms_used: int


class CompositeTau(NamedTuple):
    total: complex
    first: complex
    second: complex
    nonadditivity: complex


@dataclass(frozen=True)
class ProperDuration:
    tau: float
    speed_ratio: float
    xi_sq: float


# --------------------------------------------------------------------------
# sampled data
# --------------------------------------------------------------------------

def numeric_tau(data: rm.SampledResponse, order: int = 4,
                max_step: float = math.pi) -> TemporalFunction:
    """Temporal function of tabulated data by finite differences.

    The phase is unwrapped cumulatively from the ratio of adjacent samples,
    which assumes every true phase step is smaller than pi in magnitude.
    A wrapped step of ``max_step`` or more raises :class:`PhaseJump`; the
    default ``pi`` only catches exact half-cycle ambiguities, a smaller value
    enforces oversampling. ``order`` selects 2nd- or 4th-order stencils.
    """
    omega = data.omega
    value = data.value
    mag = np.abs(value)
    if np.any(mag < ZERO_GUARD):
        bad = int(np.argmax(mag < ZERO_GUARD))
        raise ZeroResponse(f"|S| below {ZERO_GUARD:g} at omega={omega[bad]!r}")
    if omega.size < order + 1:
        raise ValueError(f"order {order} needs at least {order + 1} samples")

    steps = np.angle(value[1:] / value[:-1])
    max_seen = float(np.max(np.abs(steps))) if steps.size else 0.0
    if max_seen >= max_step * (1.0 - 1e-12):
        i = int(np.argmax(np.abs(steps)))
        raise PhaseJump(f"phase step {steps[i]:.6g} between omega={omega[i]!r} and "
                        f"{omega[i + 1]!r}; refine the grid")
    phase = np.angle(value[0]) + np.concatenate(([0.0], np.cumsum(steps)))

    tau1 = derivative(omega, phase, order)
    tau2 = -derivative(omega, np.log(mag), order)
    return TemporalFunction(omega, tau1, tau2, max_phase_step=max_seen)


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def _lorentzian_tau(model, omega):
    if model.form == "resonant":
        x = omega - model.omega0
        d = x * x + 0.25 * model.gamma ** 2
        return 0.5 * model.gamma / d, x / d
    # exact log-derivative of the two-pole form: tau = -i * 2w / (a^2 - w^2)
    a = model.omega0 + 0.5j * model.gamma
    tau = -1j * 2.0 * omega / (a * a - omega * omega)
    return tau.real, tau.imag


def model_tau(model: rm.ResponseModel, omega: Optional[float] = None,
              tol: float = rm.POLE_ATOL) -> tuple[float, float]:
    """Closed-form ``(tau1, tau2)`` of an analytic model at ``omega``.

    For :class:`~tempus.response_models.PauliVillars` the argument is the
    energy and defaults to the model's ``p0``.
    """
    if isinstance(model, rm.PauliVillars):
        e = model.p0 if omega is None else omega
        rm._check_pole(e, model.poles(-np.inf, np.inf), tol)
        p2 = model.p_squared(e)
        return 0.0, 2 * e / (p2 - model.m ** 2) + 2 * e / (p2 - model.bigM ** 2)
    if omega is None:
        raise TypeError("omega is required for this model")

    if isinstance(model, rm.Lorentzian):
        t1, t2 = _lorentzian_tau(model, omega)
        return float(t1), float(t2)
    if isinstance(model, rm.PureDelay):
        return float(model.tdelay), 0.0

    rm._check_pole(omega, model.poles(omega - 1.0, omega + 1.0)
                   if not isinstance(model, rm.FreePhoton)
                   else model.poles(-np.inf, np.inf), tol)
    if isinstance(model, rm.FreePhoton):
        w = model.on_shell
        return 0.0, 2.0 * omega / (omega * omega - w * w)
    if isinstance(model, rm.PauliJordan):
        x = omega * model.r
        return 0.0, -model.r * math.cos(x) / math.sin(x)
    if isinstance(model, rm.NearField):
        x = omega * model.r
        return 0.0, 2.0 / omega - model.r * math.cos(x) / math.sin(x)
    raise TypeError(f"unsupported model {type(model).__name__}")


def model_tau_grid(model: rm.ResponseModel, omega, pole_window: float = 0.0
                   ) -> TemporalFunction:
    """Closed-form temporal function on a grid, masking pole-adjacent samples.

    A sample is masked when it lies within ``pole_window`` (absolute) of a
    pole, or evaluation raises :class:`PoleHit`.
    """
    omega = np.asarray(omega, dtype=float)
    tau1 = np.zeros_like(omega)
    tau2 = np.zeros_like(omega)
    masked = np.zeros(omega.shape, dtype=bool)
    poles = np.array(rm.pole_set(model, omega.min() - pole_window, omega.max() + pole_window)
                     if omega.size else [])
    for i, w in enumerate(omega):
        if poles.size and np.min(np.abs(poles - w)) <= pole_window:
            masked[i] = True
            continue
        try:
            tau1[i], tau2[i] = model_tau(model, w)
        except PoleHit:
            masked[i] = True
    return TemporalFunction(omega, tau1, tau2, masked)


def singular_delays(model: rm.ResponseModel, lo: float, hi: float) -> list[SingularDelay]:
    """Delta-function delays that a sampled grid cannot represent.

    The free photon carries ``tau1 = pi*[delta(omega - c|k|) + delta(omega + c|k|)]``
    on shell; every other model returns an empty list.
    """
    if isinstance(model, rm.FreePhoton):
        return [SingularDelay(p, math.pi) for p in model.poles(lo, hi)]
    return []


# --------------------------------------------------------------------------
# Coulomb-subtracted Pauli-Jordan formation time
# --------------------------------------------------------------------------

def _series_sum(a, terms):
    """``sum_{n>=1} 1/(n^2 - a^2)`` by explicit terms plus a Hurwitz-zeta tail.

    The tail ``sum_{n>N} 1/(n^2-a^2) = sum_k a^(2k) zeta(2k+2, N+1)`` converges
    geometrically with ratio ``(a/(N+1))**2``; ``N`` is raised above ``2|a|``
    so that ratio stays below 1/4.
    """
    n_terms = max(int(terms), int(math.ceil(2.0 * abs(a))) + 1)
    n = np.arange(1, n_terms + 1, dtype=float)
    head = math.fsum(1.0 / (n * n - a * a))
    tail_terms = []
    a2 = a * a
    power = 1.0
    for k in range(200):
        t = power * special.zeta(2 * k + 2, n_terms + 1)
        tail_terms.append(t)
        if abs(t) < 1e-18 * (abs(head) + 1e-300):
            break
        power *= a2
    tail = math.fsum(tail_terms)
    return head + tail, tail, n_terms


def renormalized_pj_tau(omega: float, r: float, terms: int = 50) -> RenormalizedTau:
    """Formation time of the Pauli-Jordan function with the Coulomb term removed.

    ``tau2 = -r*(cot(omega*r) - 1/(omega*r))`` computed two ways: the closed
    form, and the partial-fraction series
    ``-2*x*r * sum_n 1/(x^2 - pi^2 n^2)`` (``x = omega*r``), truncated at
    ``terms`` and completed by an accelerated tail.
    """
    if terms < 1:
        raise DomainError("terms must be >= 1")
    if not r > 0:
        raise DomainError("r must be > 0")
    x = omega * r
    k = round(x / math.pi)
    if k != 0 and abs(x - k * math.pi) <= max(rm.POLE_ATOL, rm.POLE_ATOL * abs(x)):
        raise PoleHit(f"omega*r = {x!r} is at the pole {k}*pi", pole=k * math.pi / r)
    if x == 0.0:
        return RenormalizedTau(0.0, 0.0, 0.0, int(terms))

    closed = -r * (math.cos(x) / math.sin(x) - 1.0 / x)
    a = x / math.pi
    s, tail, used = _series_sum(a, terms)
    # 1/(x^2 - pi^2 n^2) = -(1/pi^2) / (n^2 - a^2)
    series = 2.0 * x * r * s / math.pi ** 2
    return RenormalizedTau(closed, series, 2.0 * x * r * tail / math.pi ** 2, used)


def formation_pole(r: float, terms: int = 50) -> tuple[float, float]:
    """First pole of the renormalized formation time and the formation path.

    Located numerically as the root of ``1/tau2`` computed from the series
    route, bracketed in ``omega*r`` in ``(pi/2, 1.4*pi)``, below the first
    zero of tau2 at ``tan x = x``. Returns ``(omega_pole, path)`` with
    ``path = pi/omega_pole``.
    """
    from scipy.optimize import brentq

    def inv(x):
        with np.errstate(divide="ignore"):
            s, _, _ = _series_sum(x / math.pi, terms)
        return 0.0 if not np.isfinite(s) else 1.0 / s

    x_star = brentq(inv, 0.5 * math.pi, 1.4 * math.pi, xtol=1e-15, maxiter=200)
    w = x_star / r
    return w, math.pi / w


# --------------------------------------------------------------------------
# composition, proper duration, switching
# --------------------------------------------------------------------------

def compose_tau(k1: Callable[[float], complex], k2: Callable[[float], complex],
                gamma_c: float, omega: float, step: Optional[float] = None) -> CompositeTau:
    """Temporal function of the resolvent ``1/(1 - gamma*(K1 + K2))``.

    Also returns the temporal functions of each resolvent alone and the
    non-additive remainder ``total - first - second``. Derivatives of the
    kernels are taken numerically (Richardson-extrapolated central
    differences with step ``step``).
    """
    h = default_step(omega) if step is None else step
    g = gamma_c
    v1, v2 = complex(k1(omega)), complex(k2(omega))
    dens = (1 - g * (v1 + v2), 1 - g * v1, 1 - g * v2)
    if min(abs(d) for d in dens) < 1e-12:
        raise ResolventSingular(f"resolvent denominator vanishes at omega={omega!r}")
    d1 = complex(richardson_derivative(lambda w: complex(k1(w)), omega, h, levels=2))
    d2 = complex(richardson_derivative(lambda w: complex(k2(w)), omega, h, levels=2))
    # (d/(i dw)) ln[1/(1 - gK)] = -i * g K' / (1 - gK)
    total = -1j * g * (d1 + d2) / dens[0]
    first = -1j * g * d1 / dens[1]
    second = -1j * g * d2 / dens[2]
    return CompositeTau(total, first, second, total - first - second)


def proper_duration(tau: float, v_over_c: float) -> ProperDuration:
    """Invariant ``xi^2 = tau^2 (1 - v^2/c^2)`` of the duration 4-vector."""
    if not 0.0 <= v_over_c <= 1.0:
        raise DomainError(f"v/c must lie in [0, 1], got {v_over_c}")
    return ProperDuration(tau, v_over_c, tau * tau * (1.0 - v_over_c * v_over_c))


_SWITCH_SIGN = {"symmetric": 0.0, "turn_on": 1.0, "turn_off": -1.0}


def switching_tau(gamma_s: float, omega: float, omega0: float,
                  mode: str = "symmetric") -> tuple[float, float]:
    """Temporal functions generated by an adiabatic switching profile.

    ``symmetric`` is ``q(t) = exp(-gamma|t|)``; ``turn_on``/``turn_off`` are
    the one-sided profiles ``theta(+-t) exp(-gamma|t|)``.
    """
    if not gamma_s > 0:
        raise DomainError("gamma_s must be > 0")
    if mode not in _SWITCH_SIGN:
        raise DomainError(f"unknown mode {mode!r}")
    x = omega - omega0
    d = math.pi * (x * x + gamma_s * gamma_s)
    return gamma_s / d, _SWITCH_SIGN[mode] * x / d


def switching_tau_numeric(gamma_s: float, omega: float, omega0: float,
                          mode: str = "symmetric", window: Optional[float] = None,
                          points: int = 20001) -> tuple[float, float]:
    """Same as :func:`switching_tau` by quadrature of the switching profile.

    The temporal function is the normalised Fourier transform of ``q(t)``
    evaluated at the detuning ``omega - omega0``; ``q`` is truncated to
    ``|t| <= window`` (default ``40/gamma_s``) and integrated with Simpson's
    rule on each half-line separately so the kink at ``t = 0`` is a node.
    """
    from scipy.integrate import simpson

    if not gamma_s > 0:
        raise DomainError("gamma_s must be > 0")
    if mode not in _SWITCH_SIGN:
        raise DomainError(f"unknown mode {mode!r}")
    T = 40.0 / gamma_s if window is None else window
    x = omega - omega0
    t = np.linspace(0.0, T, points)
    decay = np.exp(-gamma_s * t)
    forward = simpson(decay * np.exp(1j * x * t), x=t)    # int_0^T
    backward = simpson(decay * np.exp(-1j * x * t), x=t)  # int_{-T}^0
    if mode == "symmetric":
        val = (forward + backward) / (2.0 * math.pi)
    elif mode == "turn_on":
        val = forward / math.pi
    else:
        val = backward / math.pi
    return float(val.real), float(val.imag)
