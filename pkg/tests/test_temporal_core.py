"""Tests for temporal functions: numeric, closed-form and derived."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tempus import response_models as rm
from tempus import temporal_core as tc
from tempus.errors import DomainError, PhaseJump, PoleHit, ResolventSingular


def test_constant_response_has_zero_tau():
    w = np.linspace(0, 1, 11)
    tf = tc.numeric_tau(rm.SampledResponse(w, np.full(11, 2 + 0j)))
    assert tf.tau1 == pytest.approx(np.zeros(11), abs=1e-12)
    assert tf.tau2 == pytest.approx(np.zeros(11), abs=1e-12)


def test_pure_delay_numeric():
    w = np.arange(0, 1.0001, 0.01)
    tf = tc.numeric_tau(rm.sample(rm.PureDelay(5.0), w))
    assert tf.tau1 == pytest.approx(np.full(w.size, 5.0), abs=1e-8)
    assert tf.tau2 == pytest.approx(np.zeros(w.size), abs=1e-8)


def test_lorentzian_numeric_at_resonance():
    w = np.linspace(0.9, 1.1, 401)
    tf = tc.numeric_tau(rm.sample(rm.Lorentzian(1.0, 0.1), w))
    i = 200
    assert w[i] == pytest.approx(1.0)
    assert tf.tau1[i] == pytest.approx(20.0, rel=1e-6)
    assert tf.tau2[i] == pytest.approx(0.0, abs=1e-5)


def test_numeric_formation_time_sign():
    # off resonance on the blue side the Lorentzian formation time is positive
    model = rm.Lorentzian(1.0, 0.1)
    w = np.linspace(1.0, 1.1, 201)
    tf = tc.numeric_tau(rm.sample(model, w))
    assert tf.tau2[100] == pytest.approx(tc.model_tau(model, w[100])[1], rel=1e-6)
    assert tf.tau2[100] > 0


def test_phase_jump_detected():
    # alternating sign: every step is exactly half a cycle, direction unknowable
    w = np.linspace(0, 5, 6)
    with pytest.raises(PhaseJump):
        tc.numeric_tau(rm.SampledResponse(w, np.array([1, -1, 1, -1, 1, -1], dtype=complex)))
    # a stricter threshold flags undersampling earlier
    w = np.linspace(0, 10, 6)
    data = rm.sample(rm.PureDelay(1.5), w)
    assert tc.numeric_tau(data).tau1 == pytest.approx(np.full(6, 1.5))
    with pytest.raises(PhaseJump):
        tc.numeric_tau(data, max_step=math.pi / 2)


def test_order_two_is_less_accurate_than_order_four():
    w = np.linspace(0.8, 1.2, 81)
    data = rm.sample(rm.Lorentzian(1.0, 0.1), w)
    exact = np.array([tc.model_tau(rm.Lorentzian(1.0, 0.1), x)[0] for x in w])
    err2 = np.max(np.abs(tc.numeric_tau(data, order=2).tau1 - exact))
    err4 = np.max(np.abs(tc.numeric_tau(data, order=4).tau1 - exact))
    assert err4 < err2


def test_model_tau_examples():
    assert tc.model_tau(rm.FreePhoton(1.0), 2.0) == pytest.approx((0.0, 4 / 3))
    assert tc.model_tau(rm.Lorentzian(1.0, 0.1), 1.05) == pytest.approx((10.0, 10.0))
    assert tc.model_tau(rm.NearField(1.0), math.pi / 2) == pytest.approx((0.0, 4 / math.pi))
    pv = rm.PauliVillars(m=1.0, bigM=10.0, p0=2.0, pmag=1.0)
    assert tc.model_tau(pv)[1] == pytest.approx(2.0 + 4.0 / (3.0 - 100.0))
    assert tc.model_tau(pv)[1] == pytest.approx(1.95876, abs=1e-5)
    assert tc.model_tau(rm.PureDelay(3.0), 0.2) == (3.0, 0.0)


def test_model_tau_pole_hit():
    with pytest.raises(PoleHit):
        tc.model_tau(rm.PauliJordan(1.0), math.pi)


def test_two_level_form_log_derivative():
    model = rm.Lorentzian(1.0, 0.1, form="two_level")
    w = np.linspace(0.9, 1.1, 801)
    tf = tc.numeric_tau(rm.sample(model, w))
    exact = np.array([tc.model_tau(model, x) for x in w])
    assert tf.tau1[400] == pytest.approx(exact[400, 0], rel=1e-6)
    # the literal two-pole form delays with the opposite sign to the causal pole
    assert exact[400, 0] < 0


def test_model_tau_grid_masks_poles():
    w = np.linspace(2.0, 4.0, 201)
    tf = tc.model_tau_grid(rm.PauliJordan(1.0), w, pole_window=0.05)
    near = np.abs(w - math.pi) <= 0.05
    assert np.array_equal(tf.masked, near)
    assert np.all(np.isfinite(tf.tau2))


def test_singular_delay_reported_for_free_photon():
    (d,) = tc.singular_delays(rm.FreePhoton(2.0), 0.0, 5.0)
    assert d.omega_at == 2.0 and d.weight == pytest.approx(math.pi)
    assert tc.singular_delays(rm.PureDelay(1.0), 0, 5) == []


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 5.0), st.floats(0.01, 3.0))
def test_lorentzian_symmetry(delta, gamma):
    m = rm.Lorentzian(2.0, gamma)
    t1p, t2p = tc.model_tau(m, 2.0 + delta)
    t1m, t2m = tc.model_tau(m, 2.0 - delta)
    assert t1p == pytest.approx(t1m, rel=1e-12)
    assert t2p == pytest.approx(-t2m, rel=1e-12)


def test_lorentzian_sum_rule():
    # a single pole winds the phase by pi, so the full integral of tau1 is pi;
    # over +-50 gamma the arctangent antiderivative gives 2*atan(100)
    g = 0.1
    w = np.linspace(1 - 50 * g, 1 + 50 * g, 20001)
    t1 = np.array([tc.model_tau(rm.Lorentzian(1.0, g), x)[0] for x in w])
    integral = np.trapezoid(t1, w) if hasattr(np, "trapezoid") else np.trapz(t1, w)
    assert integral == pytest.approx(2 * math.atan(100), rel=1e-4)
    assert integral == pytest.approx(math.pi, rel=0.02)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_scale_covariance(c):
    w = np.linspace(0.5, 1.5, 101)
    base = rm.sample(rm.Lorentzian(1.0, 0.3), w)
    scaled = rm.SampledResponse(w, c * base.value)
    a, b = tc.numeric_tau(base), tc.numeric_tau(scaled)
    assert np.max(np.abs(a.tau1 - b.tau1)) < 1e-9
    assert np.max(np.abs(a.tau2 - b.tau2)) < 1e-9


def test_renormalized_examples():
    out = tc.renormalized_pj_tau(math.pi / 2, 1.0)
    assert out.closed == pytest.approx(2 / math.pi, rel=1e-14)
    assert out.series == pytest.approx(out.closed, rel=1e-12)
    small = tc.renormalized_pj_tau(1e-3, 1.0)
    assert small.series == pytest.approx(1e-3 / 3, rel=1e-5)
    # -r*cot(x) grows without bound as x approaches pi from below
    near = tc.renormalized_pj_tau(math.pi - 1e-6, 1.0)
    assert near.closed > 1e5
    assert near.series == pytest.approx(near.closed, rel=1e-9)
    with pytest.raises(PoleHit):
        tc.renormalized_pj_tau(math.pi, 1.0)


def test_formation_pole_and_path():
    w, path = tc.formation_pole(2.0)
    assert w * 2.0 == pytest.approx(math.pi, abs=1e-9)
    assert path == pytest.approx(2.0)


def test_compose_example():
    k1 = lambda w: 0.1 * np.exp(1j * w)
    k2 = lambda w: 0.2 * np.exp(2j * w)
    out = tc.compose_tau(k1, k2, 1.0, 0.0)
    assert out.total == pytest.approx(0.5 / 0.7, rel=1e-8)
    assert out.first == pytest.approx(0.1 / 0.9, rel=1e-8)
    assert out.second == pytest.approx(0.4 / 0.8, rel=1e-8)
    assert out.nonadditivity == pytest.approx(0.5 / 0.7 - 0.1 / 0.9 - 0.5, rel=1e-7)
    assert out.nonadditivity.real == pytest.approx(0.10317, abs=1e-5)


def test_compose_trivial_cases():
    k1 = lambda w: 0.3 * np.exp(1j * w)
    zero = lambda w: 0.0
    out = tc.compose_tau(k1, zero, 0.5, 0.2)
    assert out.nonadditivity == pytest.approx(0, abs=1e-12)
    assert out.total == pytest.approx(out.first)
    const = tc.compose_tau(lambda w: 0.2, lambda w: 0.3, 1.0, 1.0)
    assert abs(const.total) < 1e-12 and abs(const.first) < 1e-12


def test_compose_singular():
    with pytest.raises(ResolventSingular):
        tc.compose_tau(lambda w: 0.5, lambda w: 0.5, 1.0, 0.0)


def test_proper_duration():
    assert tc.proper_duration(2.0, 0.0).xi_sq == 4.0
    assert tc.proper_duration(2.0, 0.6).xi_sq == pytest.approx(2.56)
    assert tc.proper_duration(7.0, 1.0).xi_sq == 0.0
    with pytest.raises(DomainError):
        tc.proper_duration(1.0, 1.2)


def test_switching_examples():
    g = 0.2
    assert tc.switching_tau(g, 1.0, 1.0, "turn_on") == pytest.approx((1 / (math.pi * g), 0.0))
    t1, t2 = tc.switching_tau(g, 1.0 + g, 1.0, "turn_on")
    assert t1 == pytest.approx(1 / (2 * math.pi * g))
    assert t2 == pytest.approx(1 / (2 * math.pi * g))
    assert tc.switching_tau(g, 1e9, 1.0, "turn_off") == pytest.approx((0, 0), abs=1e-9)
    assert tc.switching_tau(g, 1.3, 1.0, "turn_off")[1] < 0


@pytest.mark.parametrize("mode", ["symmetric", "turn_on", "turn_off"])
@pytest.mark.parametrize("detuning", [0.0, 0.15, -0.4])
def test_switching_numeric_path(mode, detuning):
    g = 0.2
    exact = tc.switching_tau(g, 1.0 + detuning, 1.0, mode)
    num = tc.switching_tau_numeric(g, 1.0 + detuning, 1.0, mode, window=20 / g)
    assert num[0] == pytest.approx(exact[0], rel=1e-3)
    assert num[1] == pytest.approx(exact[1], rel=1e-3, abs=1e-9)
