"""Time-dependent cross-check of the stationary force formulas.

A Gaussian packet is propagated through the smoothed step with a
Crank-Nicolson scheme (unconditionally stable, norm preserving, second
order in the time step), and the momentum balance

    d<p>/dt = <-phi'(x)>

is monitored along the trajectory.  With the smoothing resolved by the
grid, every deviation term scales like the square of the time step when
the save interval is a fixed multiple of it, so halving the step must cut
the worst deviation by about four: that scaling, not just the size of the
deviation, is what the checks assert.

The final packet also yields reflection and transmission weights that are
compared against stationary probabilities at the carrier momentum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import solve_banded

from .core import GridSpec, PhysicalParams, RegularizedPotential, grid_build
from .errors import BoxTooSmall, UnderResolved
from .modes import solve_step_mode

__all__ = [
    "PacketSpec",
    "EvolutionState",
    "EhrenfestReport",
    "gaussian_packet",
    "evolve",
    "expectation_momentum",
    "momentum_imag_residue",
    "expectation_position",
    "expectation_force",
    "ehrenfest_report",
    "packet_rt",
    "compare_packet_rt",
]


@dataclass(frozen=True)
class PacketSpec:
    """Initial Gaussian wave packet and the box it lives in.

    The packet must start clear of the interface (|x0| >= 5 sigma) and the
    box must hold its initial tails with room; travel room is enforced
    dynamically by the wall guard during evolution.
    """

    x0: float
    sigma: float
    k0: float
    grid: GridSpec

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError(f"packet width must be positive, got {self.sigma}")
        if abs(self.x0) < 5.0 * self.sigma:
            raise ValueError(
                f"packet center {self.x0} sits on the interface; "
                f"need |x0| >= 5*sigma = {5.0 * self.sigma}")
        if (self.grid.x_min > self.x0 - 10.0 * self.sigma
                or self.grid.x_max < 10.0 * self.sigma):
            raise BoxTooSmall(
                f"grid [{self.grid.x_min}, {self.grid.x_max}] too tight for "
                f"a packet at {self.x0} of width {self.sigma}")


@dataclass(frozen=True)
class EvolutionState:
    """Wave function snapshot on its grid, plus the evolution ingredients."""

    x: np.ndarray
    psi: np.ndarray
    t: float
    reg: RegularizedPotential | None = None
    hbar: float = 1.0
    mass: float = 1.0

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def norm(self) -> float:
        return float(np.trapezoid(np.abs(self.psi) ** 2, self.x))

    def wall_amplitude(self) -> float:
        return float(max(abs(self.psi[1]), abs(self.psi[-2])))


def gaussian_packet(spec: PacketSpec, reg: RegularizedPotential | None = None,
                    hbar: float = 1.0, mass: float = 1.0) -> EvolutionState:
    """Normalized Gaussian packet at t = 0 on the grid of ``spec``."""
    x = grid_build(spec.grid)
    psi = np.exp(-((x - spec.x0) ** 2) / (4.0 * spec.sigma**2)
                 + 1j * spec.k0 * x)
    psi[0] = 0.0
    psi[-1] = 0.0
    norm = math.sqrt(float(np.trapezoid(np.abs(psi) ** 2, x)))
    return EvolutionState(x=x, psi=psi / norm, t=0.0, reg=reg,
                          hbar=hbar, mass=mass)


def _derivative_4th(psi: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative with the hard-wall (zero) padding."""
    padded = np.concatenate([[0.0, 0.0], psi, [0.0, 0.0]])
    return (-padded[4:] + 8.0 * padded[3:-1]
            - 8.0 * padded[1:-3] + padded[:-4]) / (12.0 * h)


def _momentum_integral(state: EvolutionState) -> complex:
    integrand = np.conj(state.psi) * _derivative_4th(state.psi, state.dx)
    return complex(-1j * state.hbar * np.trapezoid(integrand, state.x))


def expectation_momentum(state: EvolutionState) -> float:
    return float(_momentum_integral(state).real)


def momentum_imag_residue(state: EvolutionState) -> float:
    """Imaginary leakage of the momentum average (hermiticity check)."""
    p = _momentum_integral(state)
    return abs(p.imag) / max(abs(p.real), 1.0)


def expectation_position(state: EvolutionState) -> float:
    return float(np.trapezoid(state.x * np.abs(state.psi) ** 2, state.x))


def expectation_force(state: EvolutionState) -> float:
    """Mean of the force density -phi'(x) in the current packet."""
    if state.reg is None:
        return 0.0
    dphi = np.asarray(state.reg.deriv(state.x), dtype=float)
    return float(-np.trapezoid(dphi * np.abs(state.psi) ** 2, state.x))


def _cn_arrays(state: EvolutionState, dt: float):
    """Banded Crank-Nicolson system for the state's grid and potential."""
    x = state.x
    h = state.dx
    n = len(x)
    hbar, mass = state.hbar, state.mass
    bound = mass * h * h / hbar
    if dt > bound * (1.0 + 1e-12):
        raise UnderResolved(
            f"time step {dt} exceeds the resolution bound {bound}")
    if state.reg is None:
        phi = np.zeros(n)
    else:
        phi = np.asarray(state.reg.eval(x), dtype=float)
        if state.reg.eps < 4.0 * h:
            raise UnderResolved(
                f"grid spacing {h} does not resolve the smoothing width "
                f"{state.reg.eps}; need eps >= 4*h")

    alpha = 1j * dt / (2.0 * hbar)
    kin = hbar**2 / (mass * h * h)
    off = alpha * (-(hbar**2) / (2.0 * mass * h * h))
    diag_a = 1.0 + alpha * (kin + phi)
    diag_b = 1.0 - alpha * (kin + phi)
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = off
    ab[1, :] = diag_a
    ab[2, :-1] = off
    # hard walls: clamp the edge values
    ab[0, 1] = 0.0
    ab[1, 0] = 1.0
    ab[1, -1] = 1.0
    ab[2, -2] = 0.0
    return ab, diag_b, off


def _cn_step(psi: np.ndarray, ab: np.ndarray, diag_b: np.ndarray,
             off: complex) -> np.ndarray:
    rhs = np.empty_like(psi)
    rhs[1:-1] = diag_b[1:-1] * psi[1:-1] - off * (psi[:-2] + psi[2:])
    rhs[0] = 0.0
    rhs[-1] = 0.0
    return solve_banded((1, 1), ab, rhs)


def evolve(state: EvolutionState, dt: float, n_steps: int,
           wall_tol: float = 1e-6) -> EvolutionState:
    """Advance the state by n_steps Crank-Nicolson steps.

    Aborts if the wave function climbs the hard walls above ``wall_tol``:
    Dirichlet walls reflect silently, so contamination must be fatal.
    """
    ab, diag_b, off = _cn_arrays(state, dt)
    psi = state.psi
    for step in range(1, n_steps + 1):
        psi = _cn_step(psi, ab, diag_b, off)
        amp = max(abs(psi[1]), abs(psi[-2]))
        if amp > wall_tol:
            raise BoxTooSmall(
                f"wall amplitude {amp:.3e} exceeds {wall_tol} at "
                f"t = {state.t + step * dt:g}")
    return replace(state, psi=psi, t=state.t + n_steps * dt)


@dataclass(frozen=True)
class EhrenfestReport:
    """Observable series of one propagation plus the momentum-balance audit.

    ``dpdt`` holds centered differences of the momentum series at the save
    times (nan at the ends); ``max_deviation`` is the worst interior
    |dpdt - force|, and ``max_deviation_rel`` divides it by the force peak
    when the force is not identically zero.
    """

    times: np.ndarray
    momenta: np.ndarray
    forces: np.ndarray
    positions: np.ndarray
    norms: np.ndarray
    dpdt: np.ndarray
    max_deviation: float
    max_deviation_rel: float
    norm_drift: float
    wall_amplitude: float
    dt: float
    save_stride: int
    final_state: EvolutionState

    def rows(self):
        """(t, momentum, dpdt, force, norm) tuples for tabular output."""
        for i in range(len(self.times)):
            yield (float(self.times[i]), float(self.momenta[i]),
                   float(self.dpdt[i]), float(self.forces[i]),
                   float(self.norms[i]))


def ehrenfest_report(spec: PacketSpec, reg: RegularizedPotential | None,
                     dt: float, t_final: float, save_stride: int = 50,
                     hbar: float = 1.0, mass: float = 1.0,
                     wall_tol: float = 1e-6) -> EhrenfestReport:
    """Propagate the packet and audit the momentum balance along the way."""
    if save_stride < 1:
        raise ValueError("save_stride must be at least 1")
    state = gaussian_packet(spec, reg, hbar, mass)
    ab, diag_b, off = _cn_arrays(state, dt)
    n_steps = int(math.ceil(t_final / dt - 1e-12))
    n_steps += (-n_steps) % save_stride

    times, momenta, forces, positions, norms = [], [], [], [], []
    wall_max = 0.0
    psi = state.psi

    def record(t: float, cur: EvolutionState):
        nonlocal wall_max
        amp = cur.wall_amplitude()
        wall_max = max(wall_max, amp)
        if amp > wall_tol:
            raise BoxTooSmall(
                f"wall amplitude {amp:.3e} exceeds {wall_tol} at t = {t:g}")
        times.append(t)
        momenta.append(expectation_momentum(cur))
        forces.append(expectation_force(cur))
        positions.append(expectation_position(cur))
        norms.append(cur.norm())

    record(0.0, state)
    for step in range(1, n_steps + 1):
        psi = _cn_step(psi, ab, diag_b, off)
        if step % save_stride == 0:
            state = replace(state, psi=psi, t=step * dt)
            record(step * dt, state)

    times_a = np.asarray(times)
    momenta_a = np.asarray(momenta)
    forces_a = np.asarray(forces)
    positions_a = np.asarray(positions)
    norms_a = np.asarray(norms)
    dpdt = np.full_like(momenta_a, np.nan)
    if len(times_a) >= 3:
        dts = save_stride * dt
        dpdt[1:-1] = (momenta_a[2:] - momenta_a[:-2]) / (2.0 * dts)
        dev = np.abs(dpdt[1:-1] - forces_a[1:-1])
        max_dev = float(np.max(dev))
    else:
        max_dev = 0.0
    fmax = float(np.max(np.abs(forces_a)))
    return EhrenfestReport(
        times=times_a, momenta=momenta_a, forces=forces_a,
        positions=positions_a, norms=norms_a, dpdt=dpdt,
        max_deviation=max_dev,
        max_deviation_rel=(max_dev / fmax if fmax > 0.0 else max_dev),
        norm_drift=float(np.max(np.abs(norms_a - norms_a[0]))),
        wall_amplitude=wall_max, dt=dt, save_stride=save_stride,
        final_state=state)


def packet_rt(state: EvolutionState) -> tuple[float, float]:
    """Fraction of the packet's norm left and right of the interface."""
    rho = np.abs(state.psi) ** 2
    total = float(np.trapezoid(rho, state.x))
    left = float(np.trapezoid(np.where(state.x < 0.0, rho, 0.0), state.x))
    r = left / total
    return r, 1.0 - r


def compare_packet_rt(state: EvolutionState, spec: PacketSpec,
                      reg: RegularizedPotential) -> dict:
    """Compare the packet's reflected weight with stationary probabilities.

    Meaningful only for packets narrow in momentum: requires
    k0 * sigma >= 10.  Both references are reported: the smooth-profile
    stationary probability at the carrier momentum (same potential the
    packet actually scattered on) and the sharp-step one (its limit).
    """
    from .regularized import solve_smooth_mode

    if spec.k0 * spec.sigma < 10.0:
        raise UnderResolved(
            f"momentum spread too broad for a single-momentum comparison: "
            f"k0*sigma = {spec.k0 * spec.sigma:g} < 10")
    r_packet, t_packet = packet_rt(state)
    energy = (state.hbar * spec.k0) ** 2 / (2.0 * state.mass)
    pars = PhysicalParams(hbar=state.hbar, mass=state.mass, v0=reg.v0)
    nm = solve_smooth_mode("s", energy, reg, pars)
    sharp = solve_step_mode("s", energy, pars)
    r_smooth = float(abs(nm.r) ** 2)
    r_sharp = float(abs(sharp.r) ** 2)
    return {
        "r_packet": r_packet,
        "t_packet": t_packet,
        "r_stationary_smooth": r_smooth,
        "r_stationary_sharp": r_sharp,
        "t_stationary_sharp": 1.0 - r_sharp,
        "rel_difference_smooth": abs(r_packet - r_smooth) / r_smooth,
        "abs_difference_sharp": abs(r_packet - r_sharp),
    }
