"""Saltatory photon transport through a transparent medium.

A photon flies at vacuum speed ``c`` between scatterers (mean free path
``ell = 1/(density*sigma)``), is held for ``tau1`` at each scattering event,
then either travels an extra formation path ``c*tau2`` (``tau2 > 0``) or
jumps ``c*|tau2|`` instantaneously (``tau2 < 0``). Mean-field bookkeeping of
this process gives transit times and group/phase indices; the Monte Carlo
in :func:`simulate_transport` samples it directly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from . import response_models as rm
from ._numerics import derivative
from .errors import DenominatorCollapse, DomainError, GridGap, NonPhysical, NoProgress
from .temporal_core import TemporalFunction, model_tau

#: Photons per RNG block. Fixed so results do not depend on worker count.
BLOCK_SIZE = 8192


@dataclass(frozen=True)
class MediumSpec:
    """Scatterer population and sample geometry.

    ``sigma`` is either a constant cross-section or a callable of omega.
    The resonance ``(omega0, gamma)`` sets the per-event delay and formation
    times through the causal Lorentzian.
    """

    density: float
    sigma: Union[float, Callable[[float], float]]
    omega0: float
    gamma: float
    length_L: float
    mass_M: float = 1.0
    cspeed: float = 1.0

    def __post_init__(self):
        if not self.density > 0:
            raise DomainError("density must be > 0")
        if not self.length_L > 0:
            raise DomainError("length_L must be > 0")
        if not self.mass_M > 0:
            raise DomainError("mass_M must be > 0")
        if not self.cspeed > 0:
            raise DomainError("cspeed must be > 0")
        if not self.gamma > 0:
            raise DomainError("gamma must be > 0")

    def cross_section(self, omega):
        s = self.sigma(omega) if callable(self.sigma) else self.sigma
        if s < 0:
            raise DomainError(f"negative cross-section {s} at omega={omega}")
        return float(s)

    def mean_free_path(self, omega):
        s = self.cross_section(omega)
        return math.inf if s == 0 else 1.0 / (self.density * s)

    def taus(self, omega):
        return model_tau(rm.Lorentzian(self.omega0, self.gamma), omega)


@dataclass(frozen=True)
class TransportResult:
    mean_transit: float
    n_group: float
    n_events_mean: float
    samples: int
    stderr_transit: float
    stderr_n_group: float
    momentum_fraction: float
    displacement: float
    surface_effects_included: bool = False


class GroupIndex(NamedTuple):
    n_g: float
    thin_limit: float


class PhaseIndex(NamedTuple):
    n: float
    error_estimate: float


class MomentumLedger(NamedTuple):
    fraction_in_body: float
    p_photon_transit: float
    delta_hk: float
    p_minkowski: float
    p_abraham: float


class Recoil(NamedTuple):
    omega_recoil: float
    p_absorbed: float
    p_body: float
    p_total: float


class QuasiMomentum(NamedTuple):
    direct: float
    via_delay: float


class Forerunner(NamedTuple):
    j_min: float
    J_min: float


# --------------------------------------------------------------------------
# mean-field kinetics
# --------------------------------------------------------------------------

def transit_time(L, ell, tau1, tau2, c=1.0):
    """Mean transit time ``T`` and number of scattering events ``N``.

    ``N = L/(ell + c|tau2|)`` is kept fractional. For ``tau2 >= 0``
    ``T = L/c + N*tau1``; for ``tau2 < 0`` the jumped distance is not flown,
    ``T = L/c + N*(tau1 - |tau2|)``.
    """
    if not (L > 0 and ell > 0):
        raise DomainError("L and ell must be > 0")
    n = L / (ell + c * abs(tau2))
    if tau2 >= 0:
        t = L / c + n * tau1
    else:
        t = L / c + n * (tau1 - abs(tau2))
    if t < 0:
        raise NonPhysical(f"negative transit time {t}")
    return t, n


def group_index(ell, tau1, tau2, c=1.0) -> GroupIndex:
    """Group index ``1 + c*tau1/(ell + c*tau2)`` and its thin-medium limit ``1 + c*tau1/ell``."""
    if not ell > 0:
        raise DomainError("ell must be > 0")
    denom = ell + c * tau2
    if denom <= 0:
        raise DenominatorCollapse(f"ell + c*tau2 = {denom} <= 0: outside the kinetic model")
    return GroupIndex(1.0 + c * tau1 / denom, 1.0 + c * tau1 / ell)


def phase_index(omega, n_g, omega_eval, hold_below=True) -> PhaseIndex:
    """Phase index as the frequency average of the group index.

    ``n(w) = (1/w) * integral_0^w n_g``. The grid part is integrated by the
    composite trapezoid rule; the segment ``[0, omega.min()]`` is taken as
    ``n_g(omega.min()) * omega.min()`` when ``hold_below`` is true and as
    zero otherwise. The error estimate is the trapezoid-minus-Simpson
    difference on the same samples.
    """
    from scipy.integrate import simpson

    omega = np.asarray(omega, dtype=float)
    n_g = np.asarray(n_g, dtype=float)
    if omega.shape != n_g.shape or omega.size < 2:
        raise ValueError("omega and n_g must be equal-length arrays of >= 2 samples")
    if not omega_eval > 0:
        raise DomainError("omega_eval must be > 0")
    if omega_eval > omega[-1] * (1 + 1e-12) or omega_eval < omega[0]:
        raise DomainError(f"omega_eval {omega_eval} outside the grid")
    h = np.diff(omega)
    if np.any(h <= 0):
        raise GridGap("grid must be strictly increasing")
    if h.max() > 10.0 * h.min():
        raise GridGap(f"grid spacing varies by {h.max() / h.min():.3g}x (> 10x)")

    keep = omega < omega_eval
    xs = np.append(omega[keep], omega_eval)
    ys = np.append(n_g[keep], np.interp(omega_eval, omega, n_g))
    if xs.size >= 2 and xs[-1] == xs[-2]:
        xs, ys = xs[:-1], ys[:-1]
    head = n_g[0] * omega[0] if hold_below else 0.0
    if xs.size < 2:
        return PhaseIndex((head) / omega_eval if omega_eval > 0 else n_g[0], 0.0)
    trap = np.trapezoid(ys, xs) if hasattr(np, "trapezoid") else np.trapz(ys, xs)
    err = abs(trap - simpson(ys, x=xs)) if xs.size >= 3 else 0.0
    return PhaseIndex((head + trap) / omega_eval, err / omega_eval)


def phase_index_curve(omega, n_g, hold_below=True):
    """Phase index at every grid point (cumulative form of :func:`phase_index`)."""
    from scipy.integrate import cumulative_trapezoid

    omega = np.asarray(omega, dtype=float)
    n_g = np.asarray(n_g, dtype=float)
    if omega.shape != n_g.shape or omega.size < 2:
        raise ValueError("omega and n_g must be equal-length arrays of >= 2 samples")
    h = np.diff(omega)
    if np.any(h <= 0):
        raise GridGap("grid must be strictly increasing")
    if h.max() > 10.0 * h.min():
        raise GridGap(f"grid spacing varies by {h.max() / h.min():.3g}x (> 10x)")
    head = n_g[0] * omega[0] if hold_below else 0.0
    area = head + cumulative_trapezoid(n_g, omega, initial=0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        n = np.where(omega > 0, area / np.where(omega > 0, omega, 1.0), n_g)
    return n


def delay_from_index(omega, n, density_N, sigma_tot, c=1.0, order=4) -> TemporalFunction:
    """Per-event delay inferred from a phase-index curve.

    ``tau(w) = [d(w n(w))/dw - 1] / (c N sigma_tot)``, using the same
    finite-difference stencils as :func:`tempus.temporal_core.numeric_tau`.
    """
    omega = np.asarray(omega, dtype=float)
    n = np.asarray(n, dtype=float)
    if omega.size < 5:
        raise ValueError("need at least 5 samples")
    if np.any(np.diff(omega) <= 0):
        raise ValueError("omega must be strictly increasing")
    ng = derivative(omega, omega * n, order)
    tau = (ng - 1.0) / (c * density_N * sigma_tot)
    return TemporalFunction(omega, tau, np.zeros_like(tau))


# --------------------------------------------------------------------------
# momentum bookkeeping
# --------------------------------------------------------------------------

def momentum_ledger(n_g, hbar_k, n_phase) -> MomentumLedger:
    """Split of photon momentum between photon and body during transit.

    The fraction ``1 - 1/n_g`` of the transit time is spent captured, so that
    share of ``hbar_k`` sits in the body; the remainder ``hbar_k/n_g`` is the
    geometric mean of the Minkowski and Abraham momenta.
    """
    if not (n_g > 0 and n_phase > 0):
        raise DomainError("n_g and n_phase must be > 0")
    fraction = 1.0 - 1.0 / n_g
    return MomentumLedger(
        fraction_in_body=fraction,
        p_photon_transit=fraction * hbar_k,
        delta_hk=hbar_k / n_g,
        p_minkowski=n_phase * hbar_k / n_g,
        p_abraham=hbar_k / (n_phase * n_g),
    )


def displacement(n_g, hbar_omega, mass_M, L, c=1.0):
    """Body displacement for a single photon passage: ``(deltaS, deltaS/L)``.

    ``deltaS/L = (n_g - 1) * hbar_omega / (M c^2)``: along the flux for
    ``n_g > 1``, against it for ``n_g < 1``. Surface contributions excluded.
    """
    if not mass_M > 0:
        raise DomainError("mass_M must be > 0")
    rel = (n_g - 1.0) * hbar_omega / (mass_M * c * c)
    return rel * L, rel


def absorption_recoil(omega, n_phase, deltaU, hbar=1.0, c=1.0) -> Recoil:
    """Recoil on real absorption by an isolated scatterer.

    Solves ``hbar*omega = n^2 hbar Omega' + deltaU`` for ``Omega'``; the
    absorbed momentum is ``n hbar k``, the body carried ``(1 - n) hbar k``
    during transit, so the total after absorption is ``hbar k``.
    """
    if not hbar * omega > deltaU >= 0:
        raise DomainError("require hbar*omega > deltaU >= 0")
    hk = hbar * omega / c
    p_abs = n_phase * hk
    p_body = (1.0 - n_phase) * hk
    return Recoil((omega - deltaU / hbar) / n_phase ** 2, p_abs, p_body, p_body + p_abs)


def quasi_momentum(k, density_N, sigma, tau, c=1.0) -> QuasiMomentum:
    """Photon quasi-wavenumber on the lattice of scattering planes.

    Returns ``k + N*sigma`` and ``k*(1 + c*N*sigma*tau)``; the two coincide
    for ``tau = 1/(c*k)``.
    """
    if not (k > 0 and density_N >= 0 and sigma >= 0 and tau >= 0 and c > 0):
        raise DomainError("arguments must be positive")
    ns = density_N * sigma
    return QuasiMomentum(k + ns, k * (1.0 + c * ns * tau))


def evanescent_split(omega, r, c=1.0):
    """Far (propagating) and near (evanescent) parts of the in-medium propagator."""
    if not r > 0:
        raise DomainError("r must be > 0")
    x = abs(omega) * r / c
    pre = 1.0 / (4.0 * math.pi * r)
    return pre * complex(math.cos(x), math.sin(x)), pre * math.exp(-x)


def forerunner_threshold(lambda_w, v_sound, omega, hbar=1.0) -> Forerunner:
    """Photon-flux threshold below which polarization cannot build up.

    ``j_min = v_sound / lambda^3`` and ``J_min = hbar*omega*j_min``.
    """
    if not (lambda_w > 0 and v_sound > 0 and omega > 0):
        raise DomainError("arguments must be positive")
    j = v_sound / lambda_w ** 3
    return Forerunner(j, hbar * omega * j)


# --------------------------------------------------------------------------
# Monte Carlo
# --------------------------------------------------------------------------

def _block_rng(seed, block):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(block)])))


def _simulate_block(L, ell, tau1, tau2, c, count, rng):
    """Transit times and event counts for ``count`` photons.

    Photons enter at a uniformly random phase of their scatter/formation
    cycle (stationary entry): with probability ``d/(ell + d)`` they are
    still completing a formation path or jump of length ``d = c|tau2|``,
    with the remainder uniform on ``[0, d]``. This removes the entrance
    boundary layer, so expected counts equal ``L/(ell + d)`` exactly.
    """
    d = c * abs(tau2)
    pos = np.zeros(count)
    time = np.zeros(count)
    events = np.zeros(count, dtype=np.int64)

    in_cycle = rng.random(count) < d / (ell + d)
    rest = rng.random(count) * d
    lead = np.where(in_cycle, np.minimum(rest, L), 0.0)
    pos += lead
    if tau2 > 0:
        time += lead / c

    active = np.flatnonzero(pos < L)
    while active.size:
        x = rng.exponential(ell, active.size)
        p = pos[active]
        exits = p + x >= L
        out = active[exits]
        time[out] += (L - pos[out]) / c
        pos[out] = L

        stay = active[~exits]
        xs = x[~exits]
        pos[stay] += xs
        time[stay] += xs / c + tau1
        events[stay] += 1
        if d > 0:
            step = np.minimum(d, L - pos[stay])
            pos[stay] += step
            if tau2 > 0:
                time[stay] += step / c
        active = stay[pos[stay] < L]
    return time, events


def simulate_saltatory(L, ell, tau1, tau2, c=1.0, photons=100_000, seed=0,
                       workers=1):
    """Monte Carlo transit statistics for fixed ``(ell, tau1, tau2)``.

    Returns ``(mean_T, stderr_T, mean_events)``. Photons are processed in
    fixed blocks of :data:`BLOCK_SIZE`, each with its own counter-based
    (Philox) stream keyed by ``(seed, block index)``; block sums are
    combined with exact summation, so results are bit-identical for any
    ``workers``.
    """
    if photons < 1:
        raise DomainError("photons must be >= 1")
    if not (L > 0 and ell > 0):
        raise DomainError("L and ell must be > 0")
    if ell + c * tau2 <= 0:
        raise NoProgress(f"ell + c*tau2 = {ell + c * tau2} <= 0")

    n_blocks = -(-photons // BLOCK_SIZE)

    def run(b):
        count = min(BLOCK_SIZE, photons - b * BLOCK_SIZE)
        t, ev = _simulate_block(L, ell, tau1, tau2, c, count, _block_rng(seed, b))
        return math.fsum(t), math.fsum(t * t), int(ev.sum())

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    else:
        parts = [run(b) for b in range(n_blocks)]

    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    n_ev = sum(p[2] for p in parts)
    mean = s1 / photons
    if photons > 1:
        var = max(math.fsum([s2, -s1 * mean]) / (photons - 1), 0.0)
        stderr = math.sqrt(var / photons)
    else:
        stderr = 0.0
    return mean, stderr, n_ev / photons


def simulate_transport(medium: MediumSpec, omega: float, photons: int = 100_000,
                       seed: int = 0, workers: int = 1,
                       taus: Optional[tuple] = None) -> TransportResult:
    """Monte Carlo photon transport through ``medium`` at frequency ``omega``.

    ``taus`` overrides the medium's Lorentzian ``(tau1, tau2)``.
    """
    tau1, tau2 = medium.taus(omega) if taus is None else taus
    ell = medium.mean_free_path(omega)
    c, L = medium.cspeed, medium.length_L
    if ell + c * tau2 <= 0:
        raise NoProgress(f"ell + c*tau2 = {ell + c * tau2} <= 0")
    if math.isinf(ell):
        mean, stderr, ev = L / c, 0.0, 0.0
    else:
        mean, stderr, ev = simulate_saltatory(L, ell, tau1, tau2, c, photons, seed, workers)
    n_g = c * mean / L
    frac = 1.0 - 1.0 / n_g if n_g > 0 else float("nan")
    ds, _ = displacement(n_g, omega, medium.mass_M, L, c)
    return TransportResult(
        mean_transit=mean,
        n_group=n_g,
        n_events_mean=ev,
        samples=photons,
        stderr_transit=stderr,
        stderr_n_group=c * stderr / L,
        momentum_fraction=frac,
        displacement=ds,
    )
