"""Tests for the running coupling and its causality bound."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tempus import running_coupling as rc
from tempus.errors import AtPole, DenominatorCollapse, DomainError


def test_bare_coupling_examples():
    assert rc.bare_coupling(rc.CouplingSpec(0.1, cutoff_Lambda=1.0, k_scale=1.0)).alpha_c == 0.1
    alpha = 0.05
    L = 0.5 / alpha          # nu*alpha*ln = 0.5
    spec = rc.CouplingSpec(alpha, cutoff_Lambda=math.exp(L / 2), k_scale=1.0)
    assert rc.bare_coupling(spec).alpha_c == pytest.approx(2 * alpha)
    pole = rc.bare_coupling(rc.CouplingSpec(1 / 137)).landau_pole
    assert math.log(pole) == pytest.approx(68.5)


def test_bare_coupling_at_pole():
    alpha = 1 / 137
    spec = rc.CouplingSpec(alpha, cutoff_Lambda=math.exp(68.5), k_scale=1.0)
    with pytest.raises(AtPole):
        rc.bare_coupling(spec)


@given(st.floats(1e-4, 0.5), st.floats(-20, 20), st.floats(0.1, 3.0))
def test_bare_physical_round_trip(alpha, log_ratio, nu):
    if abs(1 - nu * alpha * log_ratio) < 1e-3:
        return
    ac = alpha / (1 - nu * alpha * log_ratio)
    assert rc.physical_coupling(ac, nu, log_ratio) == pytest.approx(alpha, rel=1e-12)


def test_formation_tau_examples():
    assert rc.formation_tau(2.0, 3.0, 0.0, 10.0) == pytest.approx((0.0, 4 / 3))
    assert rc.formation_tau(2.0, 3.0, 0.5, with_log=False).tau2 == pytest.approx(0.66667, abs=1e-5)
    assert rc.formation_tau(2.0, 3.0, 0.3, math.inf).tau2 == pytest.approx(4 / 3)
    with pytest.raises(DenominatorCollapse):
        rc.formation_tau(1.0, 1.0, -0.5, math.exp(2.0))
    with pytest.raises(DomainError):
        rc.formation_tau(1.0, 0.0, 0.1, 2.0)


def test_formation_tau_monotone_approach():
    cut = np.logspace(0.1, 300, 400)
    taus = [rc.formation_tau(1.0, 1.0, 0.2, c).tau2 for c in cut]
    assert all(b > a for a, b in zip(taus, taus[1:]))
    assert taus[-1] < 2.0 and taus[-1] == pytest.approx(2.0, rel=1e-2)


def test_causality_verdict_examples():
    v = rc.causality_verdict(0.12, 7)
    assert v.passes and v.bound == pytest.approx(1.7952, abs=1e-4)
    edge = rc.causality_verdict(4 * math.pi / 7, 7)
    assert edge.passes
    assert not rc.causality_verdict(4 * math.pi / 7 * (1 + 1e-12), 7).passes
    assert rc.causality_verdict(1e3, 0).bound == math.inf
    neg = rc.causality_verdict(rc.ALPHA_EM_CENSUS, -1, "em", abelian=True)
    assert neg.branch == "negative_beta" and not neg.passes


def test_weak_scale():
    w = rc.weak_scale(1 / 171, -4)
    assert w.ln_ratio == pytest.approx(269.1, abs=0.1)
    assert 268 <= w.ln_ratio <= 270
    assert w.R_w == pytest.approx(math.exp(-w.ln_ratio))
    assert rc.weak_scale(4 * math.pi, -1).ln_ratio == pytest.approx(1.0)
    assert rc.weak_scale(1e12, -1).ln_ratio == pytest.approx(0.5, rel=1e-9)
    with pytest.raises(DomainError):
        rc.weak_scale(0.1, 1.0)


def test_census_presets():
    assert rc.fermion_census(rc.PRESETS["three-family"]).summary == "conforms"
    susy = rc.fermion_census(rc.PRESETS["susy"])
    assert susy.summary == "overcrowded"
    flagged = [v.label for v in susy.verdicts if not v.passes]
    assert flagged == ["em"]


def test_census_label_inference_and_zero_beta():
    c = rc.fermion_census([("em", 0.01, -1.0), ("x", 0.5, 0.0)])
    assert not c.verdicts[0].passes
    assert c.verdicts[1].passes and c.verdicts[1].bound == math.inf
    with pytest.raises(DomainError):
        rc.fermion_census([])


def test_froissart_bound():
    assert rc.froissart_tau_bound(math.e, 2.0) == pytest.approx(8 / math.e)
    s = np.logspace(math.log10(3), 6, 500)
    b = [rc.froissart_tau_bound(x) for x in s]
    assert all(y < x for x, y in zip(b, b[1:]))
    with pytest.raises(DomainError):
        rc.froissart_tau_bound(1.0)
