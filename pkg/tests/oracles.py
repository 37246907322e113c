"""Brute-force circuit oracles for the distillation and swapping maps.

These deliberately avoid the pairwise index algebra of the implementation:
everything is built as explicit operators on the joint Hilbert space, with
noise realized through Kraus sums over Pauli operators.
"""

import itertools

import numpy as np

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_PAULIS = (_I, _X, _Y, _Z)


def _embed(op: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Lift an operator on `qubits` (MSB-first ordering) to n qubits."""
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    k = len(qubits)
    for row in range(dim):
        bits = [(row >> (n - 1 - q)) & 1 for q in range(n)]
        sub_row = 0
        for q in qubits:
            sub_row = (sub_row << 1) | bits[q]
        for sub_col in range(2**k):
            val = op[sub_row, sub_col]
            if val == 0:
                continue
            new_bits = list(bits)
            for idx, q in enumerate(qubits):
                new_bits[q] = (sub_col >> (k - 1 - idx)) & 1
            col = 0
            for b in new_bits:
                col = (col << 1) | b
            out[row, col] += val
    return out


def _cnot(n: int, control: int, target: int) -> np.ndarray:
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        c = (idx >> (n - 1 - control)) & 1
        j = idx ^ (c << (n - 1 - target))
        out[j, idx] = 1.0
    return out


def _two_qubit_depolarize(rho, qubits, n, eps):
    """(1-eps) rho + eps * uniform Pauli twirl over the two qubits."""
    if eps == 0.0:
        return rho
    twirl = np.zeros_like(rho)
    for p, q in itertools.product(_PAULIS, repeat=2):
        op = _embed(np.kron(p, q), qubits, n)
        twirl += op @ rho @ op.conj().T
    return (1.0 - eps) * rho + eps * twirl / 16.0


def _dephase_qubit(rho, qubit, n, coherence):
    if coherence >= 1.0:
        return rho
    p = (1.0 - coherence) / 2.0
    z = _embed(_Z, (qubit,), n)
    return (1.0 - p) * rho + p * (z @ rho @ z)


def fusion_circuit(rho1, rho2, eps_nn=0.0, rotate=False, coherence=1.0):
    """Two-pair fusion on the full 16-dim space: (normalized state, p_success).

    Qubit order (L1, R1, L2, R2); pair 1 is kept, pair 2 measured in Z with
    postselection on equal outcomes at the two nodes.
    """
    n = 4
    rho = np.kron(np.asarray(rho1, dtype=complex), np.asarray(rho2, dtype=complex))
    for q in range(4):
        rho = _dephase_qubit(rho, q, n, coherence)
    if rotate:
        h4 = _embed(np.kron(_H, _H), (0, 1), n) @ _embed(np.kron(_H, _H), (2, 3), n)
        rho = h4 @ rho @ h4.conj().T
    rho = _two_qubit_depolarize(rho, (0, 2), n, eps_nn)  # gate at the left node
    rho = _two_qubit_depolarize(rho, (1, 3), n, eps_nn)  # gate at the right node
    circuit = _cnot(n, 1, 3) @ _cnot(n, 0, 2)
    rho = circuit @ rho @ circuit.conj().T
    kept = np.zeros((4, 4), dtype=complex)
    for m in (0, 1):
        proj = _embed(np.outer(_I[:, m], _I[:, m].conj()), (2,), n) \
            @ _embed(np.outer(_I[:, m], _I[:, m].conj()), (3,), n)
        sub = proj @ rho @ proj
        # partial trace over qubits 2 and 3
        sub = sub.reshape(2, 2, 2, 2, 2, 2, 2, 2)
        kept += np.einsum("ijklmnkl->ijmn", sub).reshape(4, 4)
    p = float(np.real(np.trace(kept)))
    kept /= p
    if rotate:
        h2 = np.kron(_H, _H)
        kept = h2 @ kept @ h2.conj().T
    return kept, p


def swap_circuit(rho_ab, rho_bc, eps_nn=0.0, coherence=1.0):
    """Entanglement swap on the 16-dim space (A, B1, B2, C), trace preserving."""
    n = 4
    rho = np.kron(np.asarray(rho_ab, dtype=complex), np.asarray(rho_bc, dtype=complex))
    rho = _dephase_qubit(rho, 1, n, coherence)
    rho = _dephase_qubit(rho, 2, n, coherence)
    rho = _two_qubit_depolarize(rho, (1, 2), n, eps_nn)
    circuit = _embed(_H, (1,), n) @ _cnot(n, 1, 2)
    rho = circuit @ rho @ circuit.conj().T
    out = np.zeros((4, 4), dtype=complex)
    corrections = {  # keyed by (z1, z2) measurement outcome on (B1, B2)
        (0, 0): _I, (0, 1): _X, (1, 0): _Z, (1, 1): _Z @ _X,
    }
    for z1 in (0, 1):
        for z2 in (0, 1):
            proj = _embed(np.outer(_I[:, z1], _I[:, z1].conj()), (1,), n) \
                @ _embed(np.outer(_I[:, z2], _I[:, z2].conj()), (2,), n)
            sub = (proj @ rho @ proj).reshape(2, 2, 2, 2, 2, 2, 2, 2)
            branch = np.einsum("ijklmjkn->ilmn", sub).reshape(4, 4)
            u = np.kron(_I, corrections[(z1, z2)])
            out += u @ branch @ u.conj().T
    return out
