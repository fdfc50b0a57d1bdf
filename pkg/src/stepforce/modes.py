"""Exact stationary scattering modes for the sharp step.

Three one-particle theories share the same scattering geometry: a unit wave
comes in from the left, the potential jumps from 0 to v0 at x = 0.

* ``s``     nonrelativistic, scalar, second order in space,
            hbar^2 k^2 / 2m = E - phi
* ``kfg``   relativistic spin-0 in the two-component (Hamiltonian) form;
            its scalar wave function obeys (hbar c k)^2 = (E - phi)^2 - (mc^2)^2
            and stays C^1 across the step, while the two-component object
            built by :func:`fv_lift` jumps
* ``dirac`` relativistic spin-1/2, first order, same relativistic dispersion,
            two-component spinor continuous across the step

Transmitted-side regimes: ``propagating`` (real wavenumber, group velocity
away from the interface), ``evanescent`` (decaying exponential, |r| = 1),
``klein`` (E - v0 < -mc^2; the wavenumber sign is chosen so the transmitted
group velocity points in +x, which makes it negative), and the measure-zero
``threshold`` (q = 0).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import PhysicalParams
from .errors import BelowThreshold, UndefinedAtOrigin

__all__ = [
    "THEORIES",
    "MatrixSet",
    "ScatterMode",
    "FVBoundary",
    "BCResiduals",
    "RepSwapReport",
    "dispersion",
    "classify_regime",
    "solve_step_mode",
    "fv_lift",
    "fv_components",
    "bc_residuals",
    "fv_system_residual",
    "representation_swap_check",
    "random_mode",
]

THEORIES = ("s", "kfg", "dirac")

_I2 = np.eye(2, dtype=complex)


def _as_theory(theory: str) -> str:
    t = theory.lower()
    aliases = {"s": "s", "schrodinger": "s", "kfg": "kfg", "kg": "kfg",
               "dirac": "dirac", "d": "dirac"}
    if t not in aliases:
        raise ValueError(f"unknown theory {theory!r}; expected one of {THEORIES}")
    return aliases[t]


@dataclass(frozen=True)
class MatrixSet:
    """The 2x2 matrices the two relativistic theories are written with.

    tau1, tau2, tau3 are the Pauli-type matrices of the two-component
    spin-0 form; alpha and beta are the Dirac pair, alpha^2 = beta^2 = 1
    and alpha beta + beta alpha = 0.
    """

    tau1: np.ndarray
    tau2: np.ndarray
    tau3: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    @classmethod
    def default(cls) -> "MatrixSet":
        tau1 = np.array([[0, 1], [1, 0]], dtype=complex)
        tau2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
        tau3 = np.array([[1, 0], [0, -1]], dtype=complex)
        # default Dirac representation: alpha = tau1, beta = tau3
        return cls(tau1=tau1, tau2=tau2, tau3=tau3,
                   alpha=tau1.copy(), beta=tau3.copy())


DEFAULT_MATRICES = MatrixSet.default()


def dispersion(theory: str, energy: float, phi: float,
               params: PhysicalParams) -> complex:
    """Wavenumber on a side where the potential equals ``phi``.

    Returns a complex number: real positive for ordinary propagation, real
    negative in the klein regime, i*kappa (kappa > 0) for evanescent decay
    and exactly 0 at a regime threshold.
    """
    theory = _as_theory(theory)
    if theory == "s":
        d = 2.0 * params.mass * (energy - phi) / params.hbar**2
    else:
        mc2 = params.rest_energy
        d = ((energy - phi) ** 2 - mc2**2) / (params.hbar * params.c) ** 2
    if d == 0.0:
        return 0.0 + 0.0j
    if d > 0.0:
        root = np.sqrt(d)
        if theory != "s" and (energy - phi) < 0.0:
            # transmitted group velocity ~ q / (E - phi) must point in +x
            return complex(-root)
        return complex(root)
    return 1j * np.sqrt(-d)


def classify_regime(theory: str, energy: float, phi: float,
                    params: PhysicalParams) -> str:
    theory = _as_theory(theory)
    if theory == "s":
        d = energy - phi
    else:
        mc2 = params.rest_energy
        d = (energy - phi) ** 2 - mc2**2
    if d == 0.0:
        return "threshold"
    if d < 0.0:
        return "evanescent"
    if theory != "s" and (energy - phi) < 0.0:
        return "klein"
    return "propagating"


@dataclass(frozen=True)
class ScatterMode:
    """Exact stationary mode with unit incident amplitude.

    The left side carries exp(ikx) + r exp(-ikx), the right side t times the
    transmitted exponential; for the spin-1/2 theory these factors multiply
    the matching 2-spinors.  Amplitudes satisfy the interface matching
    identically, so r and t are the single source of truth for everything
    downstream.
    """

    theory: str
    energy: float
    k: complex
    q: complex
    r: complex
    t: complex
    regime: str
    params: PhysicalParams

    # -- scalar theories -------------------------------------------------
    def u(self, x: float) -> complex:
        """Scalar wave function (theories ``s`` and ``kfg``); continuous."""
        self._require_scalar()
        if x < 0.0:
            return np.exp(1j * self.k * x) + self.r * np.exp(-1j * self.k * x)
        return self.t * np.exp(1j * self.q * x)

    def ux(self, x: float) -> complex:
        """Spatial derivative of :meth:`u`; continuous for these theories."""
        self._require_scalar()
        if x < 0.0:
            return 1j * self.k * (np.exp(1j * self.k * x)
                                  - self.r * np.exp(-1j * self.k * x))
        return 1j * self.q * self.t * np.exp(1j * self.q * x)

    @property
    def psi0(self) -> complex:
        """Interface value of the scalar wave function (= 1 + r = t)."""
        self._require_scalar()
        return 1.0 + self.r

    @property
    def psix0(self) -> complex:
        """Interface value of its derivative (= ik(1 - r) = iqt)."""
        self._require_scalar()
        return 1j * self.k * (1.0 - self.r)

    def _require_scalar(self):
        if self.theory == "dirac":
            raise ValueError("scalar wave function undefined for the spin-1/2 theory")

    # -- spin-1/2 --------------------------------------------------------
    @property
    def lam_left(self) -> complex:
        return self.params.hbar * self.params.c * self.k / (
            self.energy + self.params.rest_energy)

    @property
    def lam_right(self) -> complex:
        return self.params.hbar * self.params.c * self.q / (
            self.energy - self.params.v0 + self.params.rest_energy)

    def spinor(self, x: float) -> np.ndarray:
        """Two-component spinor of the spin-1/2 mode; continuous at 0."""
        if self.theory != "dirac":
            raise ValueError("spinor defined only for the spin-1/2 theory")
        lam, lamp = self.lam_left, self.lam_right
        if x < 0.0:
            inc = np.array([1.0, lam], dtype=complex) * np.exp(1j * self.k * x)
            ref = np.array([1.0, -lam], dtype=complex) * np.exp(-1j * self.k * x)
            return inc + self.r * ref
        return self.t * np.array([1.0, lamp], dtype=complex) * np.exp(1j * self.q * x)

    def spinor_x(self, x: float) -> np.ndarray:
        if self.theory != "dirac":
            raise ValueError("spinor defined only for the spin-1/2 theory")
        lam, lamp = self.lam_left, self.lam_right
        if x < 0.0:
            inc = np.array([1.0, lam], dtype=complex) * np.exp(1j * self.k * x)
            ref = np.array([1.0, -lam], dtype=complex) * np.exp(-1j * self.k * x)
            return 1j * self.k * inc - 1j * self.k * self.r * ref
        return (1j * self.q * self.t
                * np.array([1.0, lamp], dtype=complex) * np.exp(1j * self.q * x))


def solve_step_mode(theory: str, energy: float,
                    params: PhysicalParams) -> ScatterMode:
    """Construct the exact left-incident mode at the given energy.

    Raises ``below-threshold`` when the incident side cannot propagate
    (E <= 0 nonrelativistically, E <= mc^2 relativistically).
    """
    theory = _as_theory(theory)
    if theory == "s":
        if energy <= 0.0:
            raise BelowThreshold(f"incidence needs E > 0, got E = {energy}")
    else:
        if energy <= params.rest_energy:
            raise BelowThreshold(
                f"incidence needs E > mc^2 = {params.rest_energy}, got E = {energy}")

    k = dispersion(theory, energy, 0.0, params)
    q = dispersion(theory, energy, params.v0, params)
    regime = classify_regime(theory, energy, params.v0, params)

    if theory in ("s", "kfg"):
        if abs(k + q) < 1e-12 * abs(k):
            raise ValueError(
                "incident and transmitted exponentials coincide (k + q = 0); "
                "the stationary matching is singular here")
        r = (k - q) / (k + q)
        t = 2.0 * k / (k + q)
    else:
        mc2 = params.rest_energy
        lam = params.hbar * params.c * k / (energy + mc2)
        lamp = params.hbar * params.c * q / (energy - params.v0 + mc2)
        r = (lam - lamp) / (lam + lamp)
        t = 1.0 + r
    return ScatterMode(theory=theory, energy=float(energy), k=k, q=q,
                       r=complex(r), t=complex(t), regime=regime, params=params)


# ---------------------------------------------------------------------------
# two-component lift of the spin-0 scalar mode
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FVBoundary:
    """One-sided interface data of the lifted two-component spin-0 mode.

    psi0 / psix0 are the (continuous) scalar boundary values; the Psi
    vectors are the lifted components evaluated from each side.  Their
    difference is the physical discontinuity the matricial interface
    conditions describe.
    """

    psi0: complex
    psix0: complex
    Psi_left: np.ndarray
    Psi_right: np.ndarray
    Psix_left: np.ndarray
    Psix_right: np.ndarray

    @property
    def jump_value(self) -> np.ndarray:
        return self.Psi_right - self.Psi_left

    @property
    def jump_deriv(self) -> np.ndarray:
        return self.Psix_right - self.Psix_left


def _lift_pair(value: complex, energy: float, phi: float,
               params: PhysicalParams) -> np.ndarray:
    """Stationary lift [psi +, psi -] -> components weighted by (E - phi)/mc^2."""
    w = (energy - phi) / params.rest_energy
    return 0.5 * np.array([(1.0 + w) * value, (1.0 - w) * value], dtype=complex)


def fv_lift(mode: ScatterMode) -> FVBoundary:
    """Lift the scalar spin-0 mode to its two-component interface data."""
    if mode.theory != "kfg":
        raise ValueError("the two-component lift applies to the spin-0 theory only")
    E, v0, p = mode.energy, mode.params.v0, mode.params
    psi0, psix0 = mode.psi0, mode.psix0
    return FVBoundary(
        psi0=psi0,
        psix0=psix0,
        Psi_left=_lift_pair(psi0, E, 0.0, p),
        Psi_right=_lift_pair(psi0, E, v0, p),
        Psix_left=_lift_pair(psix0, E, 0.0, p),
        Psix_right=_lift_pair(psix0, E, v0, p),
    )


def fv_components(mode: ScatterMode, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Lifted two-component pair (Psi, Psi_x) away from the interface."""
    if mode.theory != "kfg":
        raise ValueError("the two-component lift applies to the spin-0 theory only")
    if x == 0.0:
        raise UndefinedAtOrigin("lifted components jump at x = 0; take one-sided data")
    phi = mode.params.v0 if x > 0.0 else 0.0
    Psi = _lift_pair(mode.u(x), mode.energy, phi, mode.params)
    Psix = _lift_pair(mode.ux(x), mode.energy, phi, mode.params)
    return Psi, Psix


@dataclass(frozen=True)
class BCResiduals:
    """Max-abs defects of the four matricial interface conditions."""

    value_jump: float
    deriv_jump: float
    value_projected: float
    deriv_projected: float

    def max(self) -> float:
        return max(self.value_jump, self.deriv_jump,
                   self.value_projected, self.deriv_projected)


def bc_residuals(b: FVBoundary, params: PhysicalParams) -> BCResiduals:
    """Check the interface conditions of the lifted spin-0 boundary data.

    The component jump must equal (v0 / 2mc^2) [-1, +1] psi(0) (and the same
    with psi_x), while the (tau3 + i tau2)-projected combination must be
    continuous.  All four residuals vanish for exact modes.
    """
    v0 = params.v0
    mc2 = params.rest_energy
    direction = np.array([-1.0, 1.0], dtype=complex)
    proj = DEFAULT_MATRICES.tau3 + 1j * DEFAULT_MATRICES.tau2

    expected_v = v0 / (2.0 * mc2) * direction * b.psi0
    expected_d = v0 / (2.0 * mc2) * direction * b.psix0
    return BCResiduals(
        value_jump=float(np.max(np.abs(b.jump_value - expected_v))),
        deriv_jump=float(np.max(np.abs(b.jump_deriv - expected_d))),
        value_projected=float(np.max(np.abs(proj @ b.jump_value))),
        deriv_projected=float(np.max(np.abs(proj @ b.jump_deriv))),
    )


def _fv_equation_defects(energy: float, phi: float, u: complex, uxx: complex,
                         params: PhysicalParams) -> tuple[complex, complex]:
    """Defects of the two coupled first-order-in-time equations.

    The stationary mode turns the time derivative into multiplication by E.
    ``u`` and ``uxx`` are the scalar wave function and its second spatial
    derivative at the probe point; the components are rebuilt by the lift.
    """
    mc2 = params.rest_energy
    half = params.hbar**2 / (2.0 * params.mass)
    w = (energy - phi) / mc2
    comp_plus = 0.5 * (1.0 + w) * u
    comp_minus = 0.5 * (1.0 - w) * u
    d_plus = energy * comp_plus - (-half * uxx + phi * comp_plus + mc2 * comp_plus)
    d_minus = energy * comp_minus - (half * uxx + phi * comp_minus - mc2 * comp_minus)
    return d_plus, d_minus


def fv_system_residual(mode: ScatterMode, x: float) -> float:
    """Larger defect magnitude of the coupled two-component equations at x."""
    if mode.theory != "kfg":
        raise ValueError("the coupled-system residual applies to the spin-0 theory")
    if x == 0.0:
        raise UndefinedAtOrigin("equations hold on either side of the interface only")
    phi = mode.params.v0 if x > 0.0 else 0.0
    wavenumber = mode.k if x < 0.0 else mode.q
    u = mode.u(x)
    uxx = -(wavenumber**2) * u
    d_plus, d_minus = _fv_equation_defects(mode.energy, phi, u, uxx, mode.params)
    return float(max(abs(d_plus), abs(d_minus)))


# ---------------------------------------------------------------------------
# spin-1/2 representation independence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RepSwapReport:
    """Observables of the same spin-1/2 mode in two matrix representations.

    Amplitudes are compared in the unit-spinor convention (incident,
    reflected and transmitted spinors normalized to unit 2-norm), which is
    the only convention that transfers between representations; the
    interface density is reported per unit incident density.
    """

    reflection_default: float
    reflection_alt: float
    transmission_default: float
    transmission_alt: float
    interface_density_default: float
    interface_density_alt: float

    def max_abs_diff(self) -> float:
        return max(abs(self.reflection_default - self.reflection_alt),
                   abs(self.transmission_default - self.transmission_alt),
                   abs(self.interface_density_default - self.interface_density_alt))


def _check_dirac_algebra(alpha: np.ndarray, beta: np.ndarray):
    for name, m in (("alpha", alpha), ("beta", beta)):
        if m.shape != (2, 2):
            raise ValueError(f"{name} must be 2x2")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError(f"{name} must be Hermitian")
        if np.max(np.abs(m @ m - _I2)) > 1e-12:
            raise ValueError(f"{name}^2 must be the identity")
    if np.max(np.abs(alpha @ beta + beta @ alpha)) > 1e-12:
        raise ValueError("alpha and beta must anticommute")


def _unit_eigenspinor(hmat: np.ndarray, target: float) -> np.ndarray:
    """Unit-norm eigenvector of ``hmat`` whose eigenvalue is nearest ``target``."""
    vals, vecs = np.linalg.eig(hmat)
    idx = int(np.argmin(np.abs(vals - target)))
    v = vecs[:, idx]
    # fix the arbitrary phase: first component of visible size real positive
    pivot = v[0] if abs(v[0]) > 1e-8 else v[1]
    v = v * (abs(pivot) / pivot)
    return v / np.linalg.norm(v)


def _solve_generic_dirac(energy: float, params: PhysicalParams,
                         alpha: np.ndarray, beta: np.ndarray):
    """Solve the step mode using only the algebra of (alpha, beta)."""
    hc = params.hbar * params.c
    mc2 = params.rest_energy
    v0 = params.v0
    k = dispersion("dirac", energy, 0.0, params)
    q = dispersion("dirac", energy, v0, params)

    def hmat(wavenumber: complex, phi: float) -> np.ndarray:
        return hc * wavenumber * alpha + mc2 * beta + phi * _I2

    w_inc = _unit_eigenspinor(hmat(k, 0.0), energy)
    w_ref = _unit_eigenspinor(hmat(-k, 0.0), energy)
    w_trn = _unit_eigenspinor(hmat(q, v0), energy)

    coeffs = np.linalg.solve(np.column_stack([w_ref, -w_trn]), -w_inc)
    r, t = complex(coeffs[0]), complex(coeffs[1])
    rho0 = float(np.linalg.norm(w_inc + r * w_ref) ** 2)
    return abs(r) ** 2, abs(t) ** 2, rho0


def representation_swap_check(energy: float, params: PhysicalParams,
                              alt: MatrixSet) -> RepSwapReport:
    """Same physics in the default and an alternate Dirac representation.

    The default numbers come from the closed-form matching, converted to the
    unit-spinor convention; the alternate numbers are computed from scratch
    by eigen-decomposition in the alternate representation.  Anything
    representation-dependent would show up as a mismatch.
    """
    _check_dirac_algebra(np.asarray(alt.alpha, dtype=complex),
                         np.asarray(alt.beta, dtype=complex))
    mode = solve_step_mode("dirac", energy, params)
    lam, lamp = mode.lam_left, mode.lam_right
    norm_in = 1.0 + abs(lam) ** 2
    refl_default = abs(mode.r) ** 2
    # transmission from right-side data, interface density from left-side
    # data, so the two representations are compared through independent paths
    trans_default = abs(mode.t) ** 2 * (1.0 + abs(lamp) ** 2) / norm_in
    rho_default = (abs(1.0 + mode.r) ** 2
                   + abs(lam) ** 2 * abs(1.0 - mode.r) ** 2) / norm_in

    refl_alt, trans_alt, rho_alt = _solve_generic_dirac(
        energy, params, np.asarray(alt.alpha, dtype=complex),
        np.asarray(alt.beta, dtype=complex))
    return RepSwapReport(
        reflection_default=refl_default,
        reflection_alt=refl_alt,
        transmission_default=trans_default,
        transmission_alt=trans_alt,
        interface_density_default=rho_default,
        interface_density_alt=rho_alt,
    )


def random_mode(theory: str, rng, params: PhysicalParams | None = None):
    """Draw a random admissible scattering mode for property sweeps.

    Energies and heights are drawn uniformly over a range that reaches all
    regimes of each theory (propagating, evanescent, and for the
    relativistic theories the strong-step regime).  Draws that land within
    1e-3 of a regime threshold are rejected and redrawn, as is the singular
    spin-0 matching point where the two wavenumbers cancel.
    """
    theory = _as_theory(theory)
    base = params if params is not None else PhysicalParams()
    mc2 = base.rest_energy
    for _ in range(1000):
        v0 = float(rng.uniform(0.05, 3.0))
        if theory == "s":
            energy = float(rng.uniform(0.05, 3.0))
            if abs(energy - v0) < 1e-3:
                continue
        else:
            energy = mc2 + float(rng.uniform(0.05, 3.0))
            v0 = float(rng.uniform(0.05, energy + mc2 + 1.0))
            # reject near both propagation thresholds E - v0 = +-mc^2
            if min(abs(energy - v0 - mc2), abs(energy - v0 + mc2)) < 1e-3:
                continue
        pars = replace(base, v0=v0)
        k = dispersion(theory, energy, 0.0, pars)
        q = dispersion(theory, energy, v0, pars)
        if theory in ("s", "kfg") and abs(k + q) < 1e-3 * abs(k):
            continue  # singular matching point (strong-step pole)
        return solve_step_mode(theory, energy, pars)
    raise RuntimeError("rejection sampling failed to find an admissible mode")
