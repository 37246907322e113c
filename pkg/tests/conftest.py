import numpy as np
import pytest

from repeatersim import presets

# Frozen reference values for the three filtering scenarios of the SiV
# interface at its optimal cavity point.  The first state is unnormalized
# (its trace is the heralding efficiency); the other two are normalized.
REFERENCE_ETA = {"broad": 0.9187, "xx_trimmed": 0.7906, "both_narrow": 0.4167}

REFERENCE_STATES = {
    "broad": np.array([
        [0.407, 0.016j, 0.004j, 0.405 + 0.020j],
        [-0.016j, 0.034, 0.0, 0.032 - 0.016j],
        [-0.004j, 0.0, 0.019, 0.016 - 0.003j],
        [0.405 - 0.020j, 0.032 + 0.016j, 0.016 + 0.003j, 0.459],
    ]),
    "xx_trimmed": np.array([
        [0.466, 0.002 + 0.012j, 0.002 + 0.014j, 0.466 + 0.025j],
        [0.002 - 0.012j, 0.022, 0.0, 0.021 - 0.011j],
        [0.002 - 0.014j, 0.0, 0.011, 0.010 - 0.013j],
        [0.466 - 0.025j, 0.021 + 0.011j, 0.010 + 0.013j, 0.501],
    ]),
    "both_narrow": np.array([
        [0.486, 0.002 + 0.007j, 0.002 + 0.001j, 0.487 + 0.008j],
        [0.002 - 0.007j, 0.009, 0.0, 0.007 - 0.007j],
        [0.002 - 0.001j, 0.0, 0.004, 0.003 - 0.001j],
        [0.487 - 0.008j, 0.007 + 0.007j, 0.003 + 0.001j, 0.500],
    ]),
}


@pytest.fixture(scope="session")
def siv_setup():
    emitter = presets.siv()
    cavity, delta_0 = presets.siv_optimal_cavity()
    mode_x, mode_xx = presets.qd_modes(delta_0)
    return emitter, cavity, mode_x, mode_xx


@pytest.fixture(scope="session")
def snv_setup():
    emitter = presets.snv()
    cavity, delta_0 = presets.snv_optimal_cavity()
    mode_x, mode_xx = presets.qd_modes(delta_0)
    return emitter, cavity, mode_x, mode_xx


def random_two_qubit_state(rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix via a Ginibre draw."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_bell_diagonal(rng: np.random.Generator) -> np.ndarray:
    from repeatersim.twoqubit import BELL_KET

    bell = BELL_KET
    phi_m = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
    psi_p = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
    psi_m = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    w = rng.dirichlet([2.0, 1.0, 1.0, 1.0])
    out = np.zeros((4, 4), dtype=complex)
    for p, v in zip(w, (bell, phi_m, psi_p, psi_m)):
        out += p * np.outer(v, v.conj())
    return out
