"""Two-qubit density-matrix algebra: gates, noise channels and entanglement metrics.

All states are 4x4 complex ndarrays in the product basis |11>, |12>, |21>, |22>,
where 1 and 2 label the two ground spin states of a color-center qubit.  A state
may carry a sub-unit trace; the trace then encodes the heralding efficiency of
whatever probabilistic step produced it.  Channels preserve the trace exactly.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-12
POSITIVITY_TOL = 1e-10
UNITARITY_TOL = 1e-9
TRACE_TOL = 1e-9


class ContractViolation(ValueError):
    """An argument violates a documented precondition."""


def _ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
RY_HALF_PI = _ry(np.pi / 2.0)

# Two-qubit gate set used throughout the toolkit.
U_HALF_PI = np.kron(RY_HALF_PI, RY_HALF_PI)
U_CPHASE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
U_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
U_HADAMARD_PAIR = np.kron(HADAMARD, HADAMARD)

GATE_SET = {
    "u_half_pi": U_HALF_PI,
    "u_cphase": U_CPHASE,
    "u_cnot": U_CNOT,
    "u_hadamard_pair": U_HADAMARD_PAIR,
}

# |Bell> = (|11> + |22>)/sqrt(2), the target of every entanglement step.
BELL_KET = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
BELL_RHO = np.outer(BELL_KET, BELL_KET.conj())

MAX_MIXED = np.eye(4, dtype=complex) / 4.0


def ket(i: int, j: int) -> np.ndarray:
    """Basis ket |ij> with i, j in {1, 2}."""
    v = np.zeros(4, dtype=complex)
    v[2 * (i - 1) + (j - 1)] = 1.0
    return v


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def check_state(rho: np.ndarray) -> None:
    """Raise ContractViolation unless rho is a valid (possibly sub-trace) state."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ContractViolation(f"expected 4x4 state, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise ContractViolation("state is not Hermitian")
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -POSITIVITY_TOL:
        raise ContractViolation(f"state has negative eigenvalue {eigs.min():.3e}")
    tr = float(rho.trace().real)
    if not (0.0 < tr <= 1.0 + TRACE_TOL):
        raise ContractViolation(f"state trace {tr} outside (0, 1]")


def apply_gate(rho: np.ndarray, gate: np.ndarray) -> np.ndarray:
    """Conjugate rho by a unitary: U rho U^dag."""
    gate = np.asarray(gate, dtype=complex)
    if not is_unitary(gate):
        raise ContractViolation("gate is not unitary")
    return gate @ np.asarray(rho, dtype=complex) @ gate.conj().T


def depolarizing_channel(rho: np.ndarray, epsilon: float) -> np.ndarray:
    """Two-qubit depolarizing map rho -> (1-eps) rho + eps tr(rho) I/4.

    The tr(rho) factor keeps sub-unit-trace (heralded) states trace-consistent.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon={epsilon} outside [0, 1]")
    rho = np.asarray(rho, dtype=complex)
    return (1.0 - epsilon) * rho + epsilon * rho.trace() * MAX_MIXED


def single_qubit_depolarizing(rho: np.ndarray, p: float, qubit: int) -> np.ndarray:
    """Depolarize one qubit of a pair: rho -> (1-p) rho + p (I/2 (x) tr_q rho)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    rho = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if qubit == 0:
        red = np.einsum("ajal->jl", rho)  # trace over first qubit
        mixed = np.einsum("ik,jl->ijkl", PAULI_I / 2.0, red)
    elif qubit == 1:
        red = np.einsum("iaka->ik", rho)
        mixed = np.einsum("ik,jl->ijkl", red, PAULI_I / 2.0)
    else:
        raise ValueError("qubit must be 0 or 1")
    return ((1.0 - p) * rho + p * mixed).reshape(4, 4)


def dephasing_channel(rho: np.ndarray, p: float, qubit: int) -> np.ndarray:
    """Phase-flip map on one qubit: rho -> (1-p) rho + p Z_q rho Z_q."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if qubit not in (0, 1):
        raise ValueError("qubit must be 0 or 1")
    z = np.kron(PAULI_Z, PAULI_I) if qubit == 0 else np.kron(PAULI_I, PAULI_Z)
    rho = np.asarray(rho, dtype=complex)
    return (1.0 - p) * rho + p * (z @ rho @ z)


def dephase_coherence(rho: np.ndarray, factor: float, qubit: int) -> np.ndarray:
    """Dephase one qubit so its off-diagonal coherences shrink by `factor`.

    Equivalent to dephasing_channel with p = (1 - factor)/2; factor=1 is a no-op.
    """
    if not 0.0 <= factor <= 1.0:
        raise ValueError(f"coherence factor {factor} outside [0, 1]")
    return dephasing_channel(rho, (1.0 - factor) / 2.0, qubit)


def bell_fidelity(rho: np.ndarray) -> float:
    """Overlap <Bell| rho |Bell> of a normalized state with (|11>+|22>)/sqrt(2)."""
    rho = np.asarray(rho)
    tr = float(rho.trace().real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ContractViolation(
            f"bell_fidelity expects a normalized state, got trace {tr!r}"
        )
    return float(np.real(BELL_KET.conj() @ rho @ BELL_KET))


def binary_entropy(q: float) -> float:
    """H(q) = -q log2 q - (1-q) log2 (1-q), with H(0) = H(1) = 0."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q={q} outside [0, 1]")
    if q == 0.0 or q == 1.0:
        return 0.0
    return float(-q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q))
