"""Photon transport as free flights plus delays and formation paths.

Compares the Monte Carlo transit time with the mean-field closed form for a
few (tau1, tau2) pairs. Run: ``python demos/saltatory_transport.py``.
"""

from tempus import dispersion_kinetics as dk

L, ell = 100.0, 10.0
for tau1, tau2 in [(0.5, 0.0), (0.5, 2.0), (2.0, -2.0)]:
    mean, stderr, events = dk.simulate_saltatory(L, ell, tau1, tau2, photons=50_000, seed=1)
    T, N = dk.transit_time(L, ell, tau1, tau2)
    print(f"tau1={tau1:4.1f} tau2={tau2:5.1f}  MC {mean:9.4f} +- {stderr:.4f}"
          f"  closed {T:9.4f}  events {events:.3f} (mean field {N:.3f})"
          f"  n_g {mean / L:.4f}")

led = dk.momentum_ledger(n_g=1.5, hbar_k=1.0, n_phase=1.2)
print("momentum carried by the body during transit:", led.fraction_in_body)
print("sqrt(p_M p_A) =", (led.p_minkowski * led.p_abraham) ** 0.5, "= hbar k / n_g")
