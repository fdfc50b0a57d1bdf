"""Parameters, sharp and smoothed step potentials, and grids."""

import numpy as np
import pytest

from stepforce.core import (REG_SHAPES, GridSpec, PhysicalParams,
                            RegularizedPotential, StepPotential, grid_build)
from stepforce.errors import InvalidWidth, UndefinedAtOrigin


def test_default_params_are_natural_units():
    pars = PhysicalParams()
    assert pars.hbar == pars.mass == pars.c == 1.0
    assert pars.rest_energy == 1.0
    assert pars.natural_units


def test_rest_energy_scales_with_c_squared():
    pars = PhysicalParams(hbar=1.0, mass=2.0, c=10.0, natural_units=False)
    assert pars.rest_energy == 200.0


@pytest.mark.parametrize("bad", [{"hbar": 0.0}, {"mass": -1.0}, {"c": 0.0}])
def test_nonpositive_constants_rejected(bad):
    with pytest.raises(ValueError):
        PhysicalParams(natural_units=False, **bad)


def test_natural_units_flag_must_match_constants():
    with pytest.raises(ValueError):
        PhysicalParams(c=10.0, natural_units=True)


def test_sharp_step_takes_one_sided_values_only():
    step = StepPotential(v0=0.5)
    assert step.eval(-1e-12) == 0.0
    assert step.eval(1e-12) == 0.5
    with pytest.raises(UndefinedAtOrigin):
        step.eval(0.0)
    with pytest.raises(UndefinedAtOrigin):
        step.eval_array(np.array([-1.0, 0.0, 1.0]))
    out = step.eval_array(np.array([-2.0, 3.0]))
    assert np.array_equal(out, np.array([0.0, 0.5]))


@pytest.mark.parametrize("shape", REG_SHAPES)
def test_smoothed_step_midpoint_symmetry(shape):
    reg = RegularizedPotential(v0=0.7, eps=0.05, shape=shape)
    xs = np.linspace(-0.4, 0.4, 81)
    np.testing.assert_allclose(reg.eval(xs) + reg.eval(-xs), 0.7, atol=1e-15)
    assert reg.eval(0.0) == pytest.approx(0.35, abs=1e-15)


@pytest.mark.parametrize("shape", REG_SHAPES)
def test_smoothed_step_derivative_has_unit_mass(shape):
    reg = RegularizedPotential(v0=0.7, eps=0.05, shape=shape)
    half = reg.support_halfwidth()
    xs = np.linspace(-half, half, 40001)
    mass = np.trapezoid(reg.deriv(xs), xs)
    assert mass == pytest.approx(0.7, rel=1e-8)
    assert np.all(reg.deriv(xs) >= 0.0)


@pytest.mark.parametrize("shape", REG_SHAPES)
def test_smoothed_step_plateaus_outside_support(shape):
    reg = RegularizedPotential(v0=0.7, eps=0.05, shape=shape)
    half = reg.support_halfwidth()
    assert abs(reg.eval(half) - 0.7) <= 1e-16
    assert abs(reg.eval(-half)) <= 1e-16


def test_smoothed_step_derivative_matches_finite_difference():
    for shape in ("logistic", "erf"):
        reg = RegularizedPotential(v0=0.5, eps=0.1, shape=shape)
        for x in (-0.15, -0.02, 0.0, 0.07, 0.2):
            h = 1e-6
            fd = (reg.eval(x + h) - reg.eval(x - h)) / (2.0 * h)
            assert reg.deriv(x) == pytest.approx(fd, rel=1e-8, abs=1e-12)


def test_shape_aliases_canonicalize():
    assert RegularizedPotential(0.5, 0.1, "error-function").shape == "erf"
    assert RegularizedPotential(0.5, 0.1, "linear-ramp").shape == "ramp"


def test_invalid_width_and_unknown_shape_rejected():
    with pytest.raises(InvalidWidth):
        RegularizedPotential(v0=0.5, eps=0.0)
    with pytest.raises(InvalidWidth):
        RegularizedPotential(v0=0.5, eps=-0.1)
    with pytest.raises(ValueError):
        RegularizedPotential(v0=0.5, eps=0.1, shape="spline")


def test_ramp_support_is_exactly_eps():
    reg = RegularizedPotential(v0=1.0, eps=0.2, shape="ramp")
    assert reg.support_halfwidth() == 0.2
    assert reg.eval(0.21) == 1.0
    assert reg.eval(-0.21) == 0.0
    assert reg.deriv(0.21) == 0.0
    assert reg.deriv(0.0) == pytest.approx(1.0 / 0.4)


def test_grid_spec_spacing_and_validation():
    spec = GridSpec(x_min=-1.0, x_max=1.0, n_points=5)
    assert spec.dx == pytest.approx(0.5)
    xs = grid_build(spec)
    assert xs[0] == -1.0 and xs[-1] == 1.0 and len(xs) == 5
    with pytest.raises(ValueError):
        GridSpec(x_min=1.0, x_max=-1.0, n_points=5)
    with pytest.raises(ValueError):
        GridSpec(x_min=0.0, x_max=1.0, n_points=1)
