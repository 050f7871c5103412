"""Causality bound on running couplings for two sets of fermion content.

Run: ``python demos/coupling_census.py``.
"""

from tempus import running_coupling as rc

for preset in ("three-family", "susy"):
    census = rc.fermion_census(rc.PRESETS[preset])
    print(f"{preset}: {census.summary}")
    for v in census.verdicts:
        print(f"  {v.label:>6} alpha={v.alpha:.5f} beta={v.beta:+.3f}"
              f" {'ok  ' if v.passes else 'FAIL'} {v.note}")

ws = rc.weak_scale(1 / 171, -4.0)
print(f"weak coupling stays causal below ln(Lambda_w/m) = {ws.ln_ratio:.1f}")
