"""Lorentzian photon modes and single-pole Fabry-Perot filtering.

Frequencies are angular rates in GHz (1/ns), measured relative to a reference
optical transition.  A mode with decay rate gamma has the amplitude spectrum

    S(w - w0) = eps0 / (i (w - w0) + gamma/2),

whose intensity |S|^2 is a Lorentzian of FWHM gamma.  The filter is an empty,
lossless, symmetric cavity with transmittivity F(w) = kappa_f / (i w + kappa_f)
(w measured from the mode center), which narrows the line and steepens its
tails from w^-2 to w^-4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

WEAK_DRIVE_RATIO = 1e-2


class FilterError(ValueError):
    """Requested filter target is not physically reachable."""


@dataclass(frozen=True)
class PhotonMode:
    """Lorentzian emission line (center offset, FWHM bandwidth, field amplitude)."""

    omega0: float
    gamma: float
    epsilon0: float = 1e-4

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.epsilon0 <= 0:
            raise ValueError("epsilon0 must be positive")

    def check_weak_drive(self, min_decay_rate: float) -> None:
        if self.epsilon0 > WEAK_DRIVE_RATIO * min_decay_rate:
            raise ValueError(
                f"epsilon0={self.epsilon0} too large for weak driving against "
                f"decay rate {min_decay_rate}"
            )

    @property
    def norm(self) -> float:
        """Normalization N = gamma / (2 pi eps0^2) making N |S|^2 integrate to 1."""
        return self.gamma / (2.0 * np.pi * self.epsilon0**2)


def filter_kappa_for_target(gamma: float, gamma_tilde: float) -> float:
    """Cavity loss rate giving intensity FWHM gamma_tilde after filtering.

    kappa_f = (gt/2) sqrt((g^2 + gt^2) / (g^2 - gt^2)); only narrowing is possible.
    """
    if not 0.0 < gamma_tilde < gamma:
        raise FilterError(
            f"target bandwidth {gamma_tilde} not in (0, {gamma}); "
            "a passive filter can only narrow the line"
        )
    return 0.5 * gamma_tilde * np.sqrt(
        (gamma**2 + gamma_tilde**2) / (gamma**2 - gamma_tilde**2)
    )


@dataclass(frozen=True)
class FilterStage:
    """Single empty-cavity filter stage characterized by its total loss rate."""

    kappa_f: float
    target_bandwidth: float

    def __post_init__(self):
        if self.kappa_f <= 0 or self.target_bandwidth <= 0:
            raise ValueError("filter rates must be positive")

    @classmethod
    def for_target(cls, source_gamma: float, gamma_tilde: float) -> "FilterStage":
        return cls(
            kappa_f=filter_kappa_for_target(source_gamma, gamma_tilde),
            target_bandwidth=gamma_tilde,
        )

    @classmethod
    def for_kappa(cls, source_gamma: float, kappa_f: float) -> "FilterStage":
        """Stage with a given cavity rate; the bandwidth it implies is derived.

        Inverts the kappa_f closed form: gt^2 is the positive root of
        gt^4 + gt^2 (g^2 + 4 kf^2) - 4 kf^2 g^2 = 0.
        """
        if kappa_f <= 0:
            raise FilterError("kappa_f must be positive")
        b = source_gamma**2 + 4.0 * kappa_f**2
        gt2 = 0.5 * (-b + np.sqrt(b * b + 16.0 * kappa_f**2 * source_gamma**2))
        return cls(kappa_f=kappa_f, target_bandwidth=float(np.sqrt(gt2)))

    def check_consistency(self, source_gamma: float, rel_tol: float = 1e-9) -> None:
        kf = filter_kappa_for_target(source_gamma, self.target_bandwidth)
        if abs(kf - self.kappa_f) > rel_tol * kf:
            raise FilterError(
                f"kappa_f={self.kappa_f} inconsistent with target bandwidth "
                f"{self.target_bandwidth} (expected {kf})"
            )


def spectrum(mode: PhotonMode, omega) -> np.ndarray:
    """Amplitude spectrum S(w - w0) of the bare mode."""
    dw = np.asarray(omega, dtype=float) - mode.omega0
    return mode.epsilon0 / (1j * dw + mode.gamma / 2.0)


def transmittivity(filt: FilterStage, omega_rel) -> np.ndarray:
    """Empty-cavity transmission F(w) = kappa_f / (i w + kappa_f), w from line center."""
    w = np.asarray(omega_rel, dtype=float)
    return filt.kappa_f / (1j * w + filt.kappa_f)


def filtered_spectrum(mode: PhotonMode, filt: FilterStage, omega) -> np.ndarray:
    """S_f(w) = F(w - w0) S(w - w0)."""
    dw = np.asarray(omega, dtype=float) - mode.omega0
    return transmittivity(filt, dw) * spectrum(mode, omega)


def filtered_time_mode(mode: PhotonMode, filt: FilterStage, t) -> np.ndarray:
    """Time-domain mode behind the filter, from the source/cavity convolution.

    a(t) = 2 eps0 / (2 kf - g) * exp((i w0 - kf) t) * (exp((2 kf - g) t / 2) - 1)
    for t >= 0, with the analytic limit eps0 t exp((i w0 - g/2) t) at 2 kf = g.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("time-domain mode is causal; t must be >= 0")
    kf, g, w0, e0 = filt.kappa_f, mode.gamma, mode.omega0, mode.epsilon0
    d = 2.0 * kf - g
    if abs(d) < 1e-9 * max(kf, g):
        return e0 * t * np.exp((1j * w0 - g / 2.0) * t)
    # difference of the two decaying poles; stable for any sign of d
    return (2.0 * e0 / d) * (
        np.exp((1j * w0 - g / 2.0) * t) - np.exp((1j * w0 - kf) * t)
    )


def filter_transmission(gamma: float, kappa_f: float) -> float:
    """Fraction of line energy passing the filter: kf / (kf + gamma/2)."""
    return kappa_f / (kappa_f + gamma / 2.0)


def measured_fwhm(mode: PhotonMode, filt: FilterStage | None = None) -> float:
    """Numerically measured intensity FWHM, by root finding on the profile.

    The same probe works pre- and post-filter, so filter consistency checks do
    not share code with the closed-form kappa_f formula.
    """
    if filt is None:
        profile = lambda w: np.abs(spectrum(mode, w)) ** 2
    else:
        profile = lambda w: np.abs(filtered_spectrum(mode, filt, w)) ** 2
    peak = profile(mode.omega0)
    half = lambda x: profile(mode.omega0 + x) - 0.5 * peak
    hi = mode.gamma
    while half(hi) > 0:
        hi *= 2.0
    return 2.0 * brentq(half, 0.0, hi, xtol=1e-12, rtol=1e-13)
