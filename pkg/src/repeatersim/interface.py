"""Cavity reflection model and heralded spin-spin state assembly.

A four-level color center (ground spins 1, 2 and excited states A, B) sits in a
single-sided cavity.  A broadband photon reflects off the cavity and picks up a
spin-dependent amplitude r_i(w).  Measuring the photon in the X basis after a
mid-protocol pi/2 spin rotation heralds an entangled state of the two node
spins, fully determined by four frequency-averaged reflection moments per
photon (the overlap integrals i1, i2, conj(i2), i3).

Basis ordering of the two-spin state is |11>, |12>, |21>, |22>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .photonics import FilterStage, PhotonMode
from .twoqubit import (
    ContractViolation,
    U_CPHASE,
    U_HALF_PI,
    RY_HALF_PI,
    PAULI_I,
    apply_gate,
    bell_fidelity,
)

QUAD_ABS_TOL = 1e-10
# tan-substitution endpoint; tan(pi/2 - 1e-12) ~ 1e12 keeps truncated tail mass
# below the quadrature tolerance for a w^-2 integrand.
_U_MAX = np.pi / 2.0 - 1e-12


class NumericalError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class EmitterParams:
    """Optical transition parameters of one color-center qubit (rad/ns units).

    Frequencies are offsets from the 1<->A transition, which defines zero.
    gamma_1a and gamma_2b are transition half-linewidths (field decay rates),
    the quantities entering the reflection model directly.
    """

    label: str
    omega_1a: float
    omega_2b: float
    gamma_1a: float
    gamma_2b: float
    g_1a: float
    g_2b: float
    omega_s: float  # ground spin splitting, informational

    def __post_init__(self):
        for name in ("gamma_1a", "gamma_2b", "g_1a", "g_2b"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def contrast(self) -> float:
        """Optical splitting between the two working transitions."""
        return self.omega_2b - self.omega_1a

    def branch(self, which: int) -> tuple[float, float, float]:
        """(omega_T, gamma_T, g_T) for spin branch 1 or 2."""
        if which == 1:
            return self.omega_1a, self.gamma_1a, self.g_1a
        if which == 2:
            return self.omega_2b, self.gamma_2b, self.g_2b
        raise ValueError("branch must be 1 or 2")

    def min_decay_rate(self) -> float:
        return min(self.gamma_1a, self.gamma_2b)


@dataclass(frozen=True)
class CavityConfig:
    """Cavity loss rate and detuning delta_c = omega_1A - omega_c (GHz)."""

    kappa: float
    delta_c: float
    waveguide_fraction: float = 1.0

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if not 0.0 < self.waveguide_fraction <= 1.0:
            raise ValueError("waveguide_fraction must be in (0, 1]")

    def omega_c(self, emitter: EmitterParams) -> float:
        return emitter.omega_1a - self.delta_c

    @property
    def kappa_wg(self) -> float:
        return self.waveguide_fraction * self.kappa

    def cooperativity(self, emitter: EmitterParams, branch: int = 1) -> float:
        """C = g^2 / (2 gamma_fwhm kappa), quoted with the full transition width."""
        _, gamma_half, g = emitter.branch(branch)
        return g**2 / (2.0 * (2.0 * gamma_half) * self.kappa)


@dataclass(frozen=True)
class OverlapVector:
    """Conditional scattering integrals (i1, i2, conj(i2), i3) for one photon."""

    i1: float
    i2: complex
    i3: float

    def __post_init__(self):
        for name, val in (("i1", self.i1), ("i3", self.i3)):
            if abs(np.imag(val)) > 1e-10:
                raise ContractViolation(f"{name} must be real, got {val}")
            if not -1e-10 <= np.real(val) <= 0.25 + 1e-10:
                raise ContractViolation(f"{name}={val} outside [0, 1/4]")

    @property
    def i2_conj(self) -> complex:
        return np.conj(self.i2)

    def as_vector(self) -> np.ndarray:
        """Component vector (i1, i2, i2*, i3) indexed as in the state assembly."""
        return np.array([self.i1, self.i2, np.conj(self.i2), self.i3], dtype=complex)


IDEAL_OVERLAPS = OverlapVector(i1=0.25, i2=-0.25 + 0j, i3=0.25)


def reflection(omega, branch: int, emitter: EmitterParams, cavity: CavityConfig):
    """Spin-conditional reflection amplitude of the single-sided cavity.

    r(w) = 1 - 2 kwg (gamma_T - i Da) / [(kappa - i Dc)(gamma_T - i Da) + g_T^2]
    with Da = wT - w and Dc = wc - w.  kappa and gamma_T are field (half-width)
    decay rates, matching the cooperativity convention C = g^2/(2 gamma kappa):
    on full resonance of an overcoupled cavity r = (2C - 1)/(2C + 1).  Cross
    couplings are neglected, so each spin branch sees a single two-level
    transition.
    """
    omega_t, gamma_t, g_t = emitter.branch(branch)
    w = np.asarray(omega, dtype=float)
    da = omega_t - w
    dc = cavity.omega_c(emitter) - w
    atom = gamma_t - 1j * da
    cav = cavity.kappa - 1j * dc
    return 1.0 - 2.0 * cavity.kappa_wg * atom / (cav * atom + g_t**2)


def _reflection_bar_poles_res(branch, emitter, cavity):
    """UHP poles and residues of conj(r(conj z)) for the given branch.

    For real parameters rbar(z) = 1 - 2 kwg (-i(wT - z) + gT) / D(z) with
    D(z) = (-i(wc - z) + kappa)(-i(wT - z) + gT) + g^2; its poles are the
    complex conjugates of r's (lower-half-plane) poles.
    """
    omega_t, gamma_t, g_t = emitter.branch(branch)
    omega_c = cavity.omega_c(emitter)
    kwg = cavity.kappa_wg
    # D(z) = (i z + a)(i z + b) + g^2 = -z^2 + i(a+b) z + ab + g^2
    a = -1j * omega_c + cavity.kappa
    b = -1j * omega_t + gamma_t
    roots = np.roots([-1.0, 1j * (a + b), a * b + g_t**2])
    out = []
    for z0 in roots:
        num = -2.0 * kwg * (1j * z0 + b)
        dprime = -2.0 * z0 + 1j * (a + b)
        out.append((z0, num / dprime))
    return out


def _rbar(z, branch, emitter, cavity):
    """conj(r(conj z)), analytically continued off the real axis."""
    omega_t, gamma_t, g_t = emitter.branch(branch)
    omega_c = cavity.omega_c(emitter)
    atom = -1j * (omega_t - z) + gamma_t
    cav = -1j * (omega_c - z) + cavity.kappa
    return 1.0 - 2.0 * cavity.kappa_wg * atom / (cav * atom + g_t**2)


def _reflection_cont(z, branch, emitter, cavity):
    """r(z) continued off the real axis (poles in the lower half plane)."""
    omega_t, gamma_t, g_t = emitter.branch(branch)
    omega_c = cavity.omega_c(emitter)
    atom = 1j * (omega_t - z) + gamma_t
    cav = 1j * (omega_c - z) + cavity.kappa
    return 1.0 - 2.0 * cavity.kappa_wg * atom / (cav * atom + g_t**2)


def _overlaps_residue(mode, filt, emitter, cavity):
    """Closed-form overlap integrals by residue summation in the UHP.

    The integrand N |S|^2 (|F|^2) r_a rbar_b is rational in w and decays like
    w^-2, so the contour closes upward.  UHP poles: w0 + i gamma/2 from the
    source line, w0 + i kappa_f from the filter, and the two poles of rbar_b.
    """
    w0 = mode.omega0
    gam = mode.gamma
    norm = mode.norm
    e0 = mode.epsilon0

    def s_at(z):
        return e0 / (1j * (z - w0) + gam / 2.0)

    def sbar_at(z):
        return e0 / (-1j * (z - w0) + gam / 2.0)

    def f_at(z):
        return filt.kappa_f / (1j * (z - w0) + filt.kappa_f)

    def fbar_at(z):
        return filt.kappa_f / (-1j * (z - w0) + filt.kappa_f)

    def one(z):
        return 1.0 + 0.0j

    def integral(branch_a, branch_b):
        # quarter * integral of Stilde * r_a * rbar_b over the real line
        ra = lambda z: _reflection_cont(z, branch_a, emitter, cavity)
        rb = lambda z: _rbar(z, branch_b, emitter, cavity)
        fa = f_at if filt is not None else one
        fb = fbar_at if filt is not None else one

        poles = [(w0 + 0.5j * gam, -1j * e0, "s")]
        if filt is not None:
            poles.append((w0 + 1j * filt.kappa_f, -1j * filt.kappa_f, "f"))
        for z0, res in _reflection_bar_poles_res(branch_b, emitter, cavity):
            poles.append((z0, res, "rb"))

        locs = [p[0] for p in poles]
        for i in range(len(locs)):
            for j in range(i + 1, len(locs)):
                if abs(locs[i] - locs[j]) < 1e-8 * max(1.0, abs(locs[i])):
                    raise NumericalError("residue poles nearly coincide")

        total = 0.0j
        for z0, res, kind in poles:
            rest = 1.0 + 0.0j
            rest *= s_at(z0) if kind != "s" else 1.0
            rest *= sbar_at(z0)
            rest *= fa(z0) if kind != "f" else 1.0
            rest *= fb(z0)
            rest *= ra(z0)
            rest *= rb(z0) if kind != "rb" else 1.0
            total += res * rest
        return 0.25 * norm * 2j * np.pi * total

    i1 = integral(1, 1)
    i2 = integral(1, 2)
    i3 = integral(2, 2)
    # The pole machinery above works in the conjugate frequency orientation;
    # with a real spectral weight that only conjugates the cross moment.
    return OverlapVector(
        i1=float(np.real(i1)), i2=complex(np.conj(i2)), i3=float(np.real(i3))
    )


def _overlaps_quadrature(mode, filt, emitter, cavity):
    """Adaptive quadrature of the overlap integrals on a tan-compactified axis."""
    w0 = mode.omega0
    scale = max(
        mode.gamma,
        cavity.kappa,
        abs(emitter.contrast),
        abs(emitter.omega_1a - w0),
        abs(emitter.omega_2b - w0),
        abs(cavity.omega_c(emitter) - w0),
        1.0,
    )
    norm = mode.norm
    e0 = mode.epsilon0

    def integrand(u):
        t = np.tan(u)
        w = w0 + scale * t
        jac = scale * (1.0 + t * t)
        stilde = norm * e0**2 / ((scale * t) ** 2 + mode.gamma**2 / 4.0)
        if filt is not None:
            stilde = stilde * filt.kappa_f**2 / ((scale * t) ** 2 + filt.kappa_f**2)
        r1 = reflection(w, 1, emitter, cavity)
        r2 = reflection(w, 2, emitter, cavity)
        v = 0.25 * stilde * jac
        c12 = r1 * np.conj(r2)
        return np.array(
            [
                v * np.abs(r1) ** 2,
                v * np.real(c12),
                v * np.imag(c12),
                v * np.abs(r2) ** 2,
            ]
        )

    vals, err = quad_vec(integrand, -_U_MAX, _U_MAX, epsabs=QUAD_ABS_TOL, epsrel=1e-9)
    if err > 1e4 * QUAD_ABS_TOL:
        raise NumericalError(
            f"overlap quadrature error estimate {err:.2e} exceeds tolerance "
            f"(mode gamma={mode.gamma}, kappa={cavity.kappa})"
        )
    return OverlapVector(i1=float(vals[0]), i2=complex(vals[1], vals[2]), i3=float(vals[3]))


def overlap_integrals(
    mode: PhotonMode,
    filt: FilterStage | None,
    emitter: EmitterParams,
    cavity: CavityConfig,
    method: str = "quadrature",
) -> OverlapVector:
    """Conditional scattering integrals for one photon against one interface.

    i1 = 1/4 int Stilde |r1|^2, i2 = 1/4 int Stilde r1 r2*, i3 = same with r2,
    where Stilde is the normalized source intensity spectrum, multiplied by the
    filter transmission profile when a filter stage is present (the filtered
    photon is sub-normalized: lost spectral weight reduces heralding).
    """
    mode.check_weak_drive(emitter.min_decay_rate())
    if filt is not None:
        filt.check_consistency(mode.gamma)
    if method == "quadrature":
        return _overlaps_quadrature(mode, filt, emitter, cavity)
    if method == "residue":
        try:
            return _overlaps_residue(mode, filt, emitter, cavity)
        except NumericalError:
            return _overlaps_quadrature(mode, filt, emitter, cavity)
    raise ValueError(f"unknown method {method!r}")


def rotation_map_coefficients(rotation_fidelity: float) -> np.ndarray:
    """Two-spin state after the mid-protocol pi/2 rotations applied to |11><11|.

    Each spin gets an ideal Ry(pi/2) followed by single-qubit depolarizing with
    parameter p = 2 (1 - F) so the average gate fidelity equals F.
    """
    if not 0.0 <= rotation_fidelity <= 1.0:
        raise ValueError("rotation fidelity must be in [0, 1]")
    p = 2.0 * (1.0 - rotation_fidelity)
    if p > 1.0:
        raise ValueError("rotation fidelity below 1/2 is not a meaningful gate")
    plus = RY_HALF_PI @ np.array([1.0, 0.0], dtype=complex)
    sigma = (1.0 - p) * np.outer(plus, plus.conj()) + p * PAULI_I / 2.0
    return np.kron(sigma, sigma)


def _photon_pair_coefficients(photon_pair_fidelity: float) -> np.ndarray:
    """Depolarized photon Bell pair in the time-bin basis |EE'>,|EL'>,|LE'>,|LL'>."""
    if not 0.0 <= photon_pair_fidelity <= 1.0:
        raise ValueError("photon pair fidelity must be in [0, 1]")
    eps = 4.0 * (1.0 - photon_pair_fidelity) / 3.0
    psi = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return (1.0 - eps) * np.outer(psi, psi.conj()) + eps * np.eye(4, dtype=complex) / 4.0


def assemble_conditional_states(
    ix: OverlapVector,
    ixx: OverlapVector,
    photon_pair_fidelity: float = 1.0,
    rotation_fidelity: float = 1.0,
):
    """Unnormalized post-measurement spin states (rho_plus, rho_minus).

    Explicit four-index construction: for each spin element (mn, kl) the photon
    coefficients weigh products of overlap components, with the late-bin photon
    indexing the component vector as 2(m-1)+k per spin.  Written with doubled
    overlap vectors so the ideal configuration gives trace(rho_+) = 1/4.
    """
    vx = 2.0 * ix.as_vector()
    vxx = 2.0 * ixx.as_vector()
    rho_ph = _photon_pair_coefficients(photon_pair_fidelity)
    lam = rotation_map_coefficients(rotation_fidelity)

    rhos = []
    for sign in (+1.0, -1.0):
        out = np.zeros((4, 4), dtype=complex)
        for m in range(2):
            for n in range(2):
                for k in range(2):
                    for l in range(2):
                        zeta = (
                            rho_ph[0, 0] * vx[0] * vxx[0]
                            + rho_ph[1, 1] * vx[0] * vxx[2 * n + l]
                            + rho_ph[2, 2] * vx[2 * m + k] * vxx[0]
                            + rho_ph[3, 3] * vx[2 * m + k] * vxx[2 * n + l]
                            + sign * rho_ph[0, 3] * vx[k] * vxx[l]
                            + sign * rho_ph[3, 0] * vx[2 * m] * vxx[2 * n]
                        )
                        out[2 * m + n, 2 * k + l] += lam[2 * m + n, 2 * k + l] * zeta
        rhos.append(out)
    return rhos[0], rhos[1]


def spin_spin_state(
    photon_pair_fidelity: float,
    rotation_fidelity: float,
    ix: OverlapVector,
    ixx: OverlapVector,
) -> np.ndarray:
    """Unnormalized heralded two-spin state, averaged over X-measurement outcomes.

    rho = 2 U rho_+ U^dag + 2 Ucp U rho_- U^dag Ucp^dag with U the final pair of
    pi/2 rotations; trace(rho) is the heralding efficiency.
    """
    rho_p, rho_m = assemble_conditional_states(
        ix, ixx, photon_pair_fidelity, rotation_fidelity
    )
    rho_p = apply_gate(rho_p, U_HALF_PI)
    rho_m = apply_gate(apply_gate(rho_m, U_HALF_PI), U_CPHASE)
    return 2.0 * rho_p + 2.0 * rho_m


def entanglement_metrics(rho_tilde: np.ndarray) -> tuple[float, float]:
    """(efficiency, fidelity) of an unnormalized heralded state."""
    eta = float(np.real(np.trace(rho_tilde)))
    if eta <= 1e-15:
        raise ContractViolation("state has (near-)zero trace; metrics undefined")
    return eta, bell_fidelity(rho_tilde / eta)


def interface_metrics(
    emitter: EmitterParams,
    cavity: CavityConfig,
    mode_x: PhotonMode,
    mode_xx: PhotonMode,
    filter_x: FilterStage | None = None,
    filter_xx: FilterStage | None = None,
    photon_pair_fidelity: float = 1.0,
    rotation_fidelity: float = 1.0,
    method: str = "residue",
) -> tuple[float, float]:
    """(efficiency, infidelity) of the heralded spin-spin state for one setup."""
    ix = overlap_integrals(mode_x, filter_x, emitter, cavity, method=method)
    ixx = overlap_integrals(mode_xx, filter_xx, emitter, cavity, method=method)
    rho = spin_spin_state(photon_pair_fidelity, rotation_fidelity, ix, ixx)
    eta, fid = entanglement_metrics(rho)
    return eta, 1.0 - fid
