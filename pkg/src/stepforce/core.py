"""Physical constants, step and smoothed-step potentials, and grids.

The sharp step

    phi(x) = 0   (x < 0),    phi(x) = v0   (x > 0)

is deliberately left undefined at x = 0; every quantity evaluated there is
taken as a one-sided limit.  The smoothed family phi_eps replaces the jump by
a midpoint-symmetric profile of width scale eps, so that
phi_eps(0) = v0 / 2 and phi_eps(x) + phi_eps(-x) = v0 for every x.

All formulas are unit-generic: any consistent system (hbar, mass, c) works.
The default is natural units hbar = mass = c = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf, expit

from .errors import InvalidWidth, UndefinedAtOrigin

__all__ = [
    "PhysicalParams",
    "StepPotential",
    "RegularizedPotential",
    "GridSpec",
    "grid_build",
    "REG_SHAPES",
]

# Canonical smoothing shapes.  All are midpoint symmetric.
REG_SHAPES = ("logistic", "erf", "ramp")

_SHAPE_ALIASES = {
    "logistic": "logistic",
    "erf": "erf",
    "error-function": "erf",
    "ramp": "ramp",
    "linear-ramp": "ramp",
}


@dataclass(frozen=True)
class PhysicalParams:
    """Problem constants: hbar, particle mass, light speed, step height v0.

    ``natural_units`` asserts hbar = mass = c = 1 and exists so configs can
    state the convention explicitly; it does not rescale anything.
    """

    hbar: float = 1.0
    mass: float = 1.0
    c: float = 1.0
    v0: float = 0.5
    natural_units: bool = True

    def __post_init__(self):
        for name in ("hbar", "mass", "c"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.natural_units and not (self.hbar == self.mass == self.c == 1.0):
            raise ValueError("natural_units=True requires hbar = mass = c = 1")

    @property
    def rest_energy(self) -> float:
        return self.mass * self.c**2


@dataclass(frozen=True)
class StepPotential:
    """Sharp step of height v0 at x = 0, undefined exactly at the origin."""

    v0: float

    def eval(self, x: float) -> float:
        if x == 0.0:
            raise UndefinedAtOrigin(
                "step potential has no value at x = 0; use one-sided limits"
            )
        return self.v0 if x > 0.0 else 0.0

    def eval_array(self, x: np.ndarray) -> np.ndarray:
        if np.any(x == 0.0):
            raise UndefinedAtOrigin(
                "step potential has no value at x = 0; use one-sided limits"
            )
        return np.where(x > 0.0, self.v0, 0.0)


@dataclass(frozen=True)
class RegularizedPotential:
    """Midpoint-symmetric smoothing of the step with width scale eps.

    Shapes:

    * ``logistic``: v0 / (1 + exp(-x / eps))
    * ``erf``:      v0 * (1 + erf(x / eps)) / 2
    * ``ramp``:     linear ramp from 0 to v0 across [-eps, +eps]

    ``deriv`` is the exact derivative; divided by v0 it is a unit-mass
    nascent delta, which is what the smooth force integrand uses.
    """

    v0: float
    eps: float
    shape: str = "logistic"

    def __post_init__(self):
        if not (self.eps > 0.0):
            raise InvalidWidth(f"smoothing width must be positive, got {self.eps}")
        canon = _SHAPE_ALIASES.get(self.shape)
        if canon is None:
            raise ValueError(
                f"unknown shape {self.shape!r}; expected one of {sorted(_SHAPE_ALIASES)}"
            )
        object.__setattr__(self, "shape", canon)

    def eval(self, x):
        """Potential value; accepts scalars or arrays."""
        u = np.asarray(x, dtype=float) / self.eps
        if self.shape == "logistic":
            out = self.v0 * expit(u)
        elif self.shape == "erf":
            out = self.v0 * 0.5 * (1.0 + erf(u))
        else:  # ramp
            out = self.v0 * np.clip((u + 1.0) / 2.0, 0.0, 1.0)
        return out if isinstance(x, np.ndarray) else float(out)

    def deriv(self, x):
        """d(phi_eps)/dx; nonnegative, integrates to v0."""
        u = np.asarray(x, dtype=float) / self.eps
        if self.shape == "logistic":
            s = expit(u)
            out = self.v0 / self.eps * s * (1.0 - s)
        elif self.shape == "erf":
            out = self.v0 / (self.eps * np.sqrt(np.pi)) * np.exp(-(u**2))
        else:  # ramp
            out = np.where(np.abs(u) <= 1.0, self.v0 / (2.0 * self.eps), 0.0)
        return out if isinstance(x, np.ndarray) else float(out)

    def support_halfwidth(self) -> float:
        """Half-width outside which the profile equals its plateaus to 1 ulp."""
        if self.shape == "ramp":
            return self.eps
        # exp(-40) and erf tails are below double precision resolution
        return 40.0 * self.eps


@dataclass(frozen=True)
class GridSpec:
    """Uniform spatial grid on [x_min, x_max] with n_points samples."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (self.x_max > self.x_min):
            raise ValueError("x_max must exceed x_min")
        if self.n_points < 2:
            raise ValueError("need at least 2 grid points")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)


def grid_build(spec: GridSpec) -> np.ndarray:
    """Return the sample positions of ``spec`` as a float array."""
    return np.linspace(spec.x_min, spec.x_max, spec.n_points)
