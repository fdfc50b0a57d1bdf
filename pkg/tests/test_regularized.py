"""Smoothed-step modes, the quadrature force, extrapolation, diagnostics."""

import cmath

import numpy as np
import pytest

from stepforce.core import PhysicalParams, RegularizedPotential
from stepforce.errors import (BelowThreshold, NoConvergence,
                              ProbeInsideSmoothing, UnderResolved)
from stepforce.modes import solve_step_mode
from stepforce.regularized import (ConvergenceSeries, _scalar_propagator,
                                   build_piecewise_model, extrapolate,
                                   route_b_force, route_b_sweep,
                                   smooth_jump_diagnostics,
                                   solve_smooth_mode)

PARS = PhysicalParams(v0=0.5)
S_FORCE = -0.68629150101523961
D_FORCE = -0.76209992275549869
KFG_MIDPOINT_CANDIDATE = -1.2926285272888564
KFG_SHARP_CLOSED = 0.18466121818412234


def test_model_builder_guards():
    reg = RegularizedPotential(v0=0.5, eps=0.05)
    with pytest.raises(ValueError, match="domain"):
        build_piecewise_model("s", 1.0, reg, PARS, domain=5.0)
    with pytest.raises(ValueError, match="domain"):
        build_piecewise_model("s", 1.0,
                              RegularizedPotential(v0=0.5, eps=0.5), PARS)
    with pytest.raises(UnderResolved, match="resolution"):
        build_piecewise_model("s", 1.0, reg, PARS, resolution=4)


def test_model_covers_the_smoothing_window():
    reg = RegularizedPotential(v0=0.5, eps=0.05)
    model = build_piecewise_model("s", 1.0, reg, PARS)
    assert model.window == pytest.approx(reg.support_halfwidth())
    assert len(model.edges) == len(model.values) + 1
    assert abs(model.plateau_left) <= 1e-16
    assert model.plateau_right == pytest.approx(0.5, abs=1e-16)
    assert np.all(np.diff(model.values) >= 0.0)
    assert model.values[0] <= 1e-12 and model.values[-1] >= 0.5 - 1e-12


def test_plane_wave_propagator_is_exact():
    k2 = 2.0
    k = cmath.sqrt(k2)
    d = 0.3
    p = _scalar_propagator(complex(k2), d)
    start = np.array([1.0, 1j * k])
    out = p @ start
    np.testing.assert_allclose(out, np.exp(1j * k * d) * start, rtol=1e-14)
    assert abs(np.linalg.det(p) - 1.0) <= 1e-14


def test_decaying_propagator_is_exact():
    kappa = cmath.sqrt(2.0)
    p = _scalar_propagator(complex(-2.0), 0.4)
    start = np.array([1.0, -kappa])
    out = p @ start
    np.testing.assert_allclose(out, np.exp(-kappa * 0.4) * start, rtol=1e-14)


def test_propagator_series_branch_near_zero():
    p = _scalar_propagator(complex(1e-20), 1e-3)
    np.testing.assert_allclose(p, np.array([[1.0, 1e-3], [0.0, 1.0]]),
                               atol=1e-15)
    assert abs(np.linalg.det(p) - 1.0) <= 1e-14


def test_smooth_mode_approaches_the_sharp_mode():
    sharp = solve_step_mode("s", 1.0, PARS)
    errs = []
    for eps in (0.1, 0.05, 0.025):
        nm = solve_smooth_mode("s", 1.0,
                               RegularizedPotential(v0=0.5, eps=eps), PARS)
        assert nm.defect <= 1e-12
        errs.append(abs(nm.r - sharp.r))
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] <= 1e-3


@pytest.mark.parametrize("theory,energy", [("s", 1.0), ("kfg", 2.0),
                                           ("dirac", 2.0)])
def test_smooth_mode_conserves_flux(theory, energy):
    reg = RegularizedPotential(v0=0.5, eps=0.05)
    nm = solve_smooth_mode(theory, energy, reg, PARS)
    assert nm.defect <= 1e-12


def test_smooth_evanescent_mode_keeps_unit_reflection():
    reg = RegularizedPotential(v0=2.0, eps=0.05)
    nm = solve_smooth_mode("s", 1.0, reg, PhysicalParams(v0=2.0))
    assert abs(abs(nm.r) - 1.0) <= 1e-12


def test_smooth_strong_step_overreflects():
    pars = PhysicalParams(v0=5.0)
    sharp = solve_step_mode("kfg", 2.0, pars)
    # the strong-step regime converges slowly (first order in eps): assert
    # over-reflection and a strictly shrinking defect against the sharp mode
    errors = []
    for eps in (0.05, 0.025, 0.0125, 0.00625):
        nm = solve_smooth_mode("kfg", 2.0, RegularizedPotential(v0=5.0,
                                                                eps=eps), pars)
        assert nm.defect <= 1e-12
        assert abs(nm.r) > 1.0
        errors.append(abs(nm.r - sharp.r) / abs(sharp.r))
    assert errors[0] > errors[1] > errors[2] > errors[3]
    assert errors[-1] <= 0.15


def test_smooth_mode_profile_is_consistent():
    reg = RegularizedPotential(v0=0.5, eps=0.05)
    nm = solve_smooth_mode("s", 1.0, reg, PARS)
    # derivative channel against a finite difference of the value channel
    for x in (-1.0, 0.02, 1.3):
        h = 1e-5
        up, _ = nm.eval_scalar(x + h)
        um, _ = nm.eval_scalar(x - h)
        _, ux = nm.eval_scalar(x)
        assert ux == pytest.approx((up - um) / (2.0 * h), rel=1e-7)
    # continuity across the window-plateau handoff
    edge = reg.support_halfwidth()
    for x0 in (edge, -edge):
        inner, _ = nm.eval_scalar(x0 - 1e-9)
        outer, _ = nm.eval_scalar(x0 + 1e-9)
        assert abs(inner - outer) <= 1e-8


def test_smooth_solver_rejects_below_threshold():
    reg = RegularizedPotential(v0=0.5, eps=0.05)
    with pytest.raises(BelowThreshold):
        solve_smooth_mode("kfg", 0.5, reg, PARS)


@pytest.mark.parametrize("shape,min_order,tol", [("logistic", 1.0, 1e-3),
                                                 ("erf", 1.5, 1e-4),
                                                 ("ramp", 1.5, 1e-4)])
def test_route_b_reaches_the_closed_nonrelativistic_force(shape, min_order,
                                                          tol):
    series = route_b_sweep("s", 1.0, shape, 0.5, PARS)
    assert all(d <= 1e-12 for d in series.defects)
    assert series.order >= min_order
    assert abs(series.extrapolated - S_FORCE) / abs(S_FORCE) <= tol


def test_route_b_reaches_the_closed_spin_half_force():
    series = route_b_sweep("dirac", 2.0, "erf", 0.5, PARS)
    assert series.order >= 1.5
    assert abs(series.extrapolated - D_FORCE) / abs(D_FORCE) <= 1e-4


def test_route_b_two_component_limit_is_the_midpoint_average():
    series = route_b_sweep("kfg", 2.0, "erf", 0.5, PARS)
    mid_rel = (abs(series.extrapolated - KFG_MIDPOINT_CANDIDATE)
               / abs(KFG_MIDPOINT_CANDIDATE))
    sharp_rel = (abs(series.extrapolated - KFG_SHARP_CLOSED)
                 / abs(KFG_SHARP_CLOSED))
    assert mid_rel <= 1e-3
    assert sharp_rel > 0.5


def test_route_b_two_component_limit_is_shape_independent():
    limits = [route_b_sweep("kfg", 2.0, shape, 0.5, PARS).extrapolated
              for shape in ("logistic", "erf", "ramp")]
    spread = (max(limits) - min(limits)) / abs(min(limits))
    assert spread <= 1e-3


def test_route_b_single_width_force():
    # a single finite width sits near the closed force with an error that
    # shrinks as the width halves (no extrapolation in this helper)
    errors = []
    for eps in (0.1, 0.05):
        reg = RegularizedPotential(v0=0.5, eps=eps, shape="erf")
        value = route_b_force("s", 1.0, reg, PARS)
        errors.append(abs(value - S_FORCE) / abs(S_FORCE))
    assert errors[0] <= 1e-2
    assert errors[1] < 0.5 * errors[0]


def test_extrapolate_recovers_linear_and_quadratic_laws():
    eps = (0.2, 0.1, 0.05)
    limit, order, err = extrapolate(eps, [3.0 + 2.0 * e for e in eps])
    assert limit == pytest.approx(3.0, abs=1e-12)
    assert order == pytest.approx(1.0, abs=1e-9)
    assert err == pytest.approx(0.1, rel=1e-9)
    limit, order, err = extrapolate(eps, [5.0 - 4.0 * e * e for e in eps])
    assert limit == pytest.approx(5.0, abs=1e-12)
    assert order == pytest.approx(2.0, abs=1e-9)


def test_extrapolate_flat_series_short_circuits():
    limit, order, err = extrapolate((0.2, 0.1, 0.05), (0.7, 0.7, 0.7))
    assert limit == 0.7
    assert np.isnan(order)
    assert err == 0.0


def test_extrapolate_rejects_nonmonotone_series():
    with pytest.raises(NoConvergence, match="sign"):
        extrapolate((0.2, 0.1, 0.05), (1.0, 0.5, 0.8))
    with pytest.raises(NoConvergence, match="shrink"):
        extrapolate((0.2, 0.1, 0.05), (1.0, 0.9, 0.7))
    with pytest.raises(ValueError):
        extrapolate((0.2, 0.1), (1.0, 0.9))
    with pytest.raises(ValueError):
        extrapolate((0.05, 0.1, 0.2), (1.0, 0.9, 0.85))


def test_convergence_series_validates_widths():
    good = dict(theory="s", energy=1.0, v0=0.5, shape="erf",
                values=(1.0, 0.9, 0.85), defects=(0.0, 0.0, 0.0),
                extrapolated=0.8, order=1.0, error_estimate=0.01)
    ConvergenceSeries(epsilons=(0.2, 0.1, 0.05), **good)
    with pytest.raises(ValueError):
        ConvergenceSeries(epsilons=(0.05, 0.1, 0.2), **good)
    with pytest.raises(ValueError):
        ConvergenceSeries(epsilons=(0.2, 0.1), **dict(
            good, values=(1.0, 0.9), defects=(0.0, 0.0)))


def test_jump_diagnostics_probe_must_clear_the_smoothing():
    reg = RegularizedPotential(v0=0.5, eps=0.1)
    with pytest.raises(ProbeInsideSmoothing):
        smooth_jump_diagnostics(2.0, reg, PARS, probe_offset=0.2)


def test_jump_diagnostics_reproduce_the_matricial_condition():
    fractions_v, fractions_d = [], []
    for eps in (0.01, 0.005, 0.0025):
        reg = RegularizedPotential(v0=0.5, eps=eps)
        diag = smooth_jump_diagnostics(2.0, reg, PARS, probe_offset=0.2)
        fractions_v.append(diag.projected_fraction_value)
        fractions_d.append(diag.projected_fraction_deriv)
        rel = (np.linalg.norm(diag.jump_value - diag.expected_value)
               / np.linalg.norm(diag.expected_value))
        assert rel <= 0.05
    assert fractions_v[0] <= 0.005
    assert fractions_d[0] <= 0.01
    assert fractions_v[0] > fractions_v[1] > fractions_v[2]
    assert fractions_d[0] > fractions_d[1] > fractions_d[2]
