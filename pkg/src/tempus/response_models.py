"""Analytic response functions S(omega) and the sampled-data form.

All models work in natural units (hbar = 1, c configurable, default 1).
Each model is an immutable dataclass exposing ``evaluate(omega)`` and
``poles(lo, hi)``; the module-level :func:`evaluate` and :func:`pole_set`
are thin dispatchers used by :mod:`tempus.temporal_core`.

The pole set of a model is the set of real frequencies where its
temporal function diverges, i.e. poles *and* zeros of S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import InvalidModel, PoleHit

#: Absolute pole tolerance for analytic queries.
POLE_ATOL = 1e-12


def _check_pole(omega, poles, tol):
    for p in poles:
        if abs(omega - p) <= max(tol, tol * abs(p)):
            raise PoleHit(f"omega={omega!r} is within {tol:g} of pole {p!r}", pole=p)


def _multiples_in(step, lo, hi, include_zero=False):
    """All integer multiples ``n*step`` inside ``[lo, hi]``."""
    n_lo = math.ceil(lo / step - 1e-12)
    n_hi = math.floor(hi / step + 1e-12)
    return [n * step for n in range(n_lo, n_hi + 1) if include_zero or n != 0]


@dataclass(frozen=True)
class Lorentzian:
    """Isolated two-level resonance.

    ``form="resonant"`` (default) keeps the single causal pole at
    ``omega0 - i*gamma/2``::

        S(omega) = strength / (omega0 - omega - i*gamma/2)

    whose temporal function is exactly the resonance pair
    ``tau1 = (gamma/2)/D``, ``tau2 = (omega - omega0)/D`` with
    ``D = (omega - omega0)**2 + gamma**2/4``.

    ``form="two_level"`` is the two-pole susceptibility
    ``strength / (i*((omega0 + i*gamma/2)**2 - omega**2))`` taken literally.
    Its poles sit at ``+-(omega0 + i*gamma/2)``, so its exact log-derivative
    has a *negative* resonant delay plus an anti-resonant term; it is kept
    for comparison only.
    """

    omega0: float
    gamma: float
    strength: float = 1.0
    form: str = "resonant"

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidModel(f"gamma must be > 0, got {self.gamma}")
        if self.strength == 0 or not np.isfinite(self.strength):
            raise InvalidModel("strength must be finite and nonzero")
        if self.form not in ("resonant", "two_level"):
            raise InvalidModel(f"unknown Lorentzian form {self.form!r}")

    def evaluate(self, omega, tol=POLE_ATOL):
        if self.form == "resonant":
            return self.strength / (self.omega0 - omega - 0.5j * self.gamma)
        a = self.omega0 + 0.5j * self.gamma
        return self.strength / (1j * (a * a - omega * omega))

    def poles(self, lo, hi):
        return []


@dataclass(frozen=True)
class FreePhoton:
    """Lowest-order photon propagator ``4*pi/(omega**2 - c**2 k**2)``.

    Evaluated off shell as a real principal value; the on-shell delta
    contribution to the delay is reported by
    :func:`tempus.temporal_core.singular_delays`.
    """

    kmag: float
    cspeed: float = 1.0

    def __post_init__(self):
        if not self.kmag >= 0:
            raise InvalidModel(f"kmag must be >= 0, got {self.kmag}")
        if not self.cspeed > 0:
            raise InvalidModel(f"cspeed must be > 0, got {self.cspeed}")

    @property
    def on_shell(self):
        return self.cspeed * self.kmag

    def evaluate(self, omega, tol=POLE_ATOL):
        _check_pole(omega, self.poles(-np.inf, np.inf), tol)
        w = self.on_shell
        return complex(4.0 * np.pi / (omega * omega - w * w))

    def poles(self, lo, hi):
        w = self.on_shell
        cands = [0.0] if w == 0 else [-w, w]
        return [p for p in cands if lo <= p <= hi]


@dataclass(frozen=True)
class PauliJordan:
    """Pauli-Jordan commutator function in the (omega, r) representation.

    Represented by ``sin(omega*r)/(4*pi*r)``, whose log-derivative gives the
    formation time ``tau2 = -r*cot(omega*r)``. Its zeros at ``omega*r = n*pi``
    (``n != 0``) are the divergences of tau2; ``omega = 0`` is the Coulomb
    term and is not listed.
    """

    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidModel(f"r must be > 0, got {self.r}")

    def evaluate(self, omega, tol=POLE_ATOL):
        _check_pole(omega, self.poles(omega - 1.0, omega + 1.0), tol)
        return complex(np.sin(omega * self.r) / (4.0 * np.pi * self.r))

    def poles(self, lo, hi):
        return _multiples_in(np.pi / self.r, lo, hi)


@dataclass(frozen=True)
class NearField:
    """Scalar near-field function ``-sin(omega*r) / (2*pi*omega**2*r**3)``."""

    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidModel(f"r must be > 0, got {self.r}")

    def evaluate(self, omega, tol=POLE_ATOL):
        _check_pole(omega, self.poles(omega - 1.0, omega + 1.0), tol)
        r = self.r
        return complex(-np.sin(omega * r) / (2.0 * np.pi * omega * omega * r ** 3))

    def poles(self, lo, hi):
        return _multiples_in(np.pi / self.r, lo, hi, include_zero=True)


@dataclass(frozen=True)
class PureDelay:
    """``S(omega) = exp(i*omega*T)``: constant delay ``T``, no formation."""

    tdelay: float

    def __post_init__(self):
        if not np.isfinite(self.tdelay):
            raise InvalidModel("tdelay must be finite")

    def evaluate(self, omega, tol=POLE_ATOL):
        return complex(np.exp(1j * omega * self.tdelay))

    def poles(self, lo, hi):
        return []


@dataclass(frozen=True)
class PauliVillars:
    """Pauli-Villars regulated scalar propagator difference.

    ``S = (m**2 - M**2) / ((p**2 - m**2)(p**2 - M**2))`` with
    ``p**2 = E**2 - pmag**2``. The frequency argument of :meth:`evaluate`
    is the energy ``E``; ``p0`` is the default energy when none is given.
    """

    m: float
    bigM: float
    p0: float
    pmag: float = 0.0

    def __post_init__(self):
        if not (self.m >= 0 and self.bigM > self.m):
            raise InvalidModel(f"need 0 <= m < bigM, got m={self.m}, bigM={self.bigM}")

    def p_squared(self, energy=None):
        e = self.p0 if energy is None else energy
        return e * e - self.pmag * self.pmag

    def evaluate(self, omega=None, tol=POLE_ATOL):
        e = self.p0 if omega is None else omega
        _check_pole(e, self.poles(-np.inf, np.inf), tol)
        p2 = self.p_squared(e)
        m2, M2 = self.m ** 2, self.bigM ** 2
        return complex((m2 - M2) / ((p2 - m2) * (p2 - M2)))

    def single_pole_limit(self, omega=None):
        """The unregulated propagator ``1/(p**2 - m**2)`` (the ``bigM -> inf`` limit)."""
        return complex(1.0 / (self.p_squared(omega) - self.m ** 2))

    def poles(self, lo, hi):
        out = []
        for mass in (self.m, self.bigM):
            e = math.sqrt(mass * mass + self.pmag * self.pmag)
            out.extend(p for p in ((-e, e) if e > 0 else (0.0,)) if lo <= p <= hi)
        return sorted(set(out))


ResponseModel = Union[Lorentzian, FreePhoton, PauliJordan, NearField, PureDelay, PauliVillars]


def evaluate(model: ResponseModel, omega: float, tol: float = POLE_ATOL) -> complex:
    """Complex response of ``model`` at angular frequency ``omega``.

    Raises :class:`~tempus.errors.PoleHit` within ``tol`` of a pole.
    """
    return model.evaluate(omega, tol=tol)


def pole_set(model: ResponseModel, lo: float, hi: float) -> list[float]:
    """Real frequencies in ``[lo, hi]`` where the model's temporal function diverges."""
    return sorted(model.poles(lo, hi))


def sample(model: ResponseModel, omega) -> "SampledResponse":
    """Evaluate ``model`` on a grid and wrap it as a :class:`SampledResponse`."""
    omega = np.asarray(omega, dtype=float)
    values = np.array([model.evaluate(w) for w in omega], dtype=complex)
    return SampledResponse(omega, values)


@dataclass(frozen=True, eq=False)
class SampledResponse:
    """Tabulated complex response on a strictly increasing frequency grid."""

    omega: np.ndarray
    value: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        value = np.asarray(self.value, dtype=complex)
        if omega.ndim != 1 or omega.shape != value.shape:
            raise InvalidModel("omega and value must be 1-D arrays of equal length")
        if omega.size < 5:
            raise InvalidModel(f"need at least 5 samples, got {omega.size}")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(value))):
            raise InvalidModel("samples must be finite")
        if np.any(np.diff(omega) <= 0):
            raise InvalidModel("omega must be strictly increasing")
        if np.any(value == 0):
            raise InvalidModel("response values must be nonzero")
        omega.flags.writeable = False
        value.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "value", value)

    def __len__(self):
        return self.omega.size
