"""Default hardware parameter sets.

Unit conventions: the toolkit works in angular rates (rad/ns) internally.
Emitter and cavity quantities quoted in ordinary GHz are converted with the
factor 2*pi; photon bandwidths and decay rates are already inverse lifetimes
(1/ns) and enter unchanged.
"""

from __future__ import annotations

import numpy as np

from .interface import CavityConfig, EmitterParams
from .photonics import FilterStage, PhotonMode

TWO_PI = 2.0 * np.pi

# Quantum-dot cascade photons: inverse lifetimes (1/ns) of the two lines.
GAMMA_X = 4.34
GAMMA_XX = 8.33

# Transition linewidths (rad/ns, half-width convention of the reflection
# model).  SiV around 90 MHz, SnV around 3 MHz natural half-widths.
_SIV_GAMMA_1A = 0.5716
_SIV_GAMMA_2B = 0.5512
_SNV_GAMMA_1A = 0.04027
_SNV_GAMMA_2B = 0.03953

# Optical splitting omega_2B - omega_1A (ordinary GHz) of the working
# transitions at the operating magnetic-field orientation.  The sign differs
# between the two centers (the SiV carries additional static strain).
SIV_CONTRAST_GHZ = -8.2
SNV_CONTRAST_GHZ = 8.0
SIV_LOW_FIELD_CONTRAST_GHZ = -2.8  # reduced field, spin splitting near 8 GHz


def siv() -> EmitterParams:
    """SiV emitter at the high-field working point (spin splitting ~26 GHz)."""
    return EmitterParams(
        label="SiV",
        omega_1a=0.0,
        omega_2b=TWO_PI * SIV_CONTRAST_GHZ,
        gamma_1a=_SIV_GAMMA_1A,
        gamma_2b=_SIV_GAMMA_2B,
        g_1a=TWO_PI * 12.5,
        g_2b=TWO_PI * 13.17,
        omega_s=TWO_PI * 26.0,
    )


def snv() -> EmitterParams:
    """SnV emitter at its optimal field orientation (spin splitting ~10 GHz)."""
    return EmitterParams(
        label="SnV",
        omega_1a=0.0,
        omega_2b=TWO_PI * SNV_CONTRAST_GHZ,
        gamma_1a=_SNV_GAMMA_1A,
        gamma_2b=_SNV_GAMMA_2B,
        g_1a=TWO_PI * 5.17,
        g_2b=TWO_PI * 5.22,
        omega_s=TWO_PI * 10.0,
    )


def siv_low_field() -> EmitterParams:
    """SiV at reduced magnetic field (microwave-friendly spin splitting ~8 GHz).

    Couplings here are placeholders; cooperativity-capped searches derive g
    from the cap (see optimize.SearchSpace.cooperativity_cap).
    """
    return EmitterParams(
        label="SiV-lowB",
        omega_1a=0.0,
        omega_2b=TWO_PI * SIV_LOW_FIELD_CONTRAST_GHZ,
        gamma_1a=_SIV_GAMMA_1A,
        gamma_2b=_SIV_GAMMA_2B,
        g_1a=TWO_PI * 9.0,
        g_2b=TWO_PI * 8.84,
        omega_s=TWO_PI * 8.0,
    )


def siv_optimal_cavity() -> tuple[CavityConfig, float]:
    """Optimized SiV cavity and photon detuning delta_0 = omega_1A - omega_0."""
    return CavityConfig(kappa=TWO_PI * 37.70, delta_c=-TWO_PI * 4.07), TWO_PI * 5.44


def snv_optimal_cavity() -> tuple[CavityConfig, float]:
    return CavityConfig(kappa=TWO_PI * 6.69, delta_c=-TWO_PI * 4.50), -TWO_PI * 4.51


def qd_modes(
    delta_0: float, gamma_x: float = GAMMA_X, gamma_xx: float = GAMMA_XX
) -> tuple[PhotonMode, PhotonMode]:
    """Photon pair modes for a common center frequency offset delta_0."""
    return (
        PhotonMode(omega0=-delta_0, gamma=gamma_x),
        PhotonMode(omega0=-delta_0, gamma=gamma_xx),
    )


def filter_scenarios() -> dict[str, dict]:
    """The three reference filtering scenarios of the SiV interface.

    'broad' is unfiltered; 'xx_trimmed' filters only the broader line;
    'both_narrow' passes both photons through a filter cavity of the same
    linewidth, chosen to bring the broad line down to 6.5 1/ns.
    """
    shared = FilterStage.for_target(GAMMA_XX, 6.5)
    return {
        "broad": {"filter_x": None, "filter_xx": None},
        "xx_trimmed": {
            "filter_x": None,
            "filter_xx": FilterStage.for_target(GAMMA_XX, 8.1653),
        },
        "both_narrow": {
            "filter_x": FilterStage.for_kappa(GAMMA_X, shared.kappa_f),
            "filter_xx": shared,
        },
    }


# Photon-pair and microwave-rotation fidelities assumed in the noise model.
F_PH_DEFAULT = 0.99
F_MW_DEFAULT = 0.9999
