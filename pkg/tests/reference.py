"""Brute-force references used only by the tests.

Nothing here shares code with the package's solvers: amplitudes come from a
dense matrix exponential, circuits from full 2**n unitaries built with kron.
"""

import numpy as np
from scipy.linalg import expm


def amplitudes_expm(n_atoms, g, kappa, c0, t):
    """Atoms + lossy cavity amplitudes under the non-Hermitian effective
    Hamiltonian; the lost norm is the environment population."""
    d = n_atoms + 1
    H = np.zeros((d, d), dtype=complex)
    H[:n_atoms, n_atoms] = g
    H[n_atoms, :n_atoms] = g
    H[n_atoms, n_atoms] = -0.5j * kappa
    v = np.zeros(d, dtype=complex)
    v[:n_atoms] = c0
    return expm(-1j * H * t) @ v


def populations_expm(n_atoms, g, kappa, c0, t):
    amps = amplitudes_expm(n_atoms, g, kappa, c0, t)
    atoms = np.abs(amps[:n_atoms]) ** 2
    return np.append(atoms, 1.0 - atoms.sum())


_I = np.eye(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_P0 = np.diag([1.0, 0.0])
_P1 = np.diag([0.0, 1.0])


def _embed(ops, n):
    # ops: {qubit: 2x2}; qubit 0 is the least significant bit
    out = np.array([[1.0]], dtype=complex)
    for q in reversed(range(n)):
        out = np.kron(out, ops.get(q, _I))
    return out


def ry(angle):
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def dense_unitary(gate, n):
    kind = type(gate).__name__
    if kind == "PauliX":
        return _embed({gate.target: _X}, n)
    if kind == "CNOT":
        return _embed({gate.control: _P0}, n) + _embed({gate.control: _P1, gate.target: _X}, n)
    if kind == "ControlledRY":
        return _embed({gate.control: _P0}, n) + _embed(
            {gate.control: _P1, gate.target: ry(gate.angle)}, n
        )
    raise TypeError(kind)


def run_dense(circuit):
    n = circuit.n_qubits
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = 1
    for gate in circuit.gates:
        psi = dense_unitary(gate, n) @ psi
    return psi


def qubit_marginals(psi, n):
    probs = np.abs(psi) ** 2
    idx = np.arange(probs.size)
    return np.array([probs[(idx >> b) & 1 == 1].sum() for b in range(n)])


def random_coefficients(rng, n, normalised=False):
    """Real vector with squared norm <= 1 (== 1 when ``normalised``)."""
    v = rng.normal(size=n)
    v /= np.linalg.norm(v)
    if normalised:
        return v
    return v * np.sqrt(rng.uniform())
