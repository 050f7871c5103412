"""High-harmonic rate scaling and multiphoton channel thresholds.

Rates are relative (all proportionality constants set to 1) and are
accumulated in log space, so long products of small delays neither
underflow nor overflow until the final exponentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, RateOverflow

_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class HhgSpec:
    """Drive and resonance parameters for harmonic generation.

    ``flux_j * sigma`` has units of 1/time, so ``eta = j*sigma*tau1`` is a
    pure number.
    """

    flux_j: float
    sigma: float
    gamma: float
    omega0: float
    omega: float
    n_max: int = 1

    def __post_init__(self):
        if not self.flux_j >= 0:
            raise DomainError("flux_j must be >= 0")
        if not self.sigma >= 0:
            raise DomainError("sigma must be >= 0")
        if not self.gamma > 0:
            raise DomainError("gamma must be > 0")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise DomainError("n_max must be an integer >= 1")

    def tau1(self, omega):
        """Lorentzian delay ``(gamma/2) / ((omega - omega0)**2 + gamma**2/4)``."""
        half = 0.5 * self.gamma
        return half / ((omega - self.omega0) ** 2 + half * half)


def _check_n(n, lowest=1):
    if int(n) != n or n < lowest:
        raise DomainError(f"n must be an integer >= {lowest}, got {n}")
    return int(n)


def saturation_parameter(spec: HhgSpec, n: int) -> float:
    """``eta = j * sigma * tau1(n*omega)``."""
    n = _check_n(n)
    return spec.flux_j * spec.sigma * spec.tau1(n * spec.omega)


def log_hhg_rate(spec: HhgSpec, n: int) -> float:
    """Natural log of :func:`hhg_rate`; ``-inf`` when ``j*sigma = 0``."""
    n = _check_n(n)
    js = spec.flux_j * spec.sigma
    if js == 0:
        return -math.inf
    q = np.arange(1, n + 1)
    return n * math.log(js) + math.fsum(np.log(spec.tau1(q * spec.omega)))


def hhg_rate(spec: HhgSpec, n: int) -> float:
    """Relative rate ``(j*sigma)**n * prod_{q=1..n} tau1(q*omega)`` of the n-th harmonic."""
    lr = log_hhg_rate(spec, n)
    if lr > _LOG_MAX:
        raise RateOverflow(f"log rate {lr:.6g} exceeds the float range")
    return math.exp(lr)


def log_hhg_high_order(x: float, n: int) -> float:
    """Natural log of :func:`hhg_high_order`."""
    if not x >= 0:
        raise DomainError("x must be >= 0")
    n = _check_n(n, lowest=0)
    if n == 0:
        return 0.0
    if x == 0:
        return -math.inf
    return n * math.log(x) - 2.0 * float(gammaln(n + 1))


def hhg_high_order(x: float, n: int) -> float:
    """Asymptotic rate ``x**n / (n!)**2`` with ``x = j*sigma*gamma/omega**2``."""
    lr = log_hhg_high_order(x, n)
    if lr > _LOG_MAX:
        raise RateOverflow(f"log rate {lr:.6g} exceeds the float range")
    return math.exp(lr)


def channel_threshold(x: float) -> int:
    """Highest open channel: the largest ``n`` with ``R_n >= R_{n-1}``.

    Successive ratios are ``x/n**2``, so this is ``floor(sqrt(x))``; a ratio
    of exactly one counts as open.
    """
    if not x >= 0:
        raise DomainError("x must be >= 0")
    return math.isqrt(int(x))
