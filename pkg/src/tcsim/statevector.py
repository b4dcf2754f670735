"""
Dense statevector simulator for the gate set used by the circuit mapping.

Basis index bit b holds the state of qubit b (little-endian). Gate kernels
work on a ``(2,) * n`` view of the amplitude array, so each gate touches
every amplitude once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import CNOT, CircuitIR, ControlledRY, Gate, PauliX
from .errors import IndexOutOfRange, SizeLimitExceeded

MAX_QUBITS = 26


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class ShotHistogram:
    shots: int
    counts: dict[int, int]
    seed: int
    n_qubits: int

    def excitation_frequencies(self) -> np.ndarray:
        """Fraction of shots in which each qubit was measured as 1."""
        freq = np.zeros(self.n_qubits)
        for outcome, count in self.counts.items():
            for b in range(self.n_qubits):
                if outcome >> b & 1:
                    freq[b] += count
        return freq / self.shots

    def bitstring_counts(self) -> dict[str, int]:
        """Counts keyed by bitstring, highest qubit leftmost."""
        return {
            format(k, f"0{self.n_qubits}b"): v for k, v in sorted(self.counts.items())
        }


def zero_state(n_qubits: int) -> StateVector:
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if n_qubits > MAX_QUBITS:
        raise SizeLimitExceeded(f"{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit limit")
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _index(n: int, fixed: dict[int, int]) -> tuple:
    # axis 0 of the (2,)*n view is the most significant bit
    idx = [slice(None)] * n
    for qubit, value in fixed.items():
        idx[n - 1 - qubit] = value
    return tuple(idx)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply ``gate`` in place and return ``state``."""
    n = state.n_qubits
    for q in gate.qubits:
        if not 0 <= q < n:
            raise IndexOutOfRange(f"qubit {q} out of range for {n}-qubit state")
    view = state.amplitudes.reshape((2,) * n)

    if isinstance(gate, PauliX):
        lo, hi = _index(n, {gate.target: 0}), _index(n, {gate.target: 1})
        tmp = view[lo].copy()
        view[lo] = view[hi]
        view[hi] = tmp
    elif isinstance(gate, CNOT):
        lo = _index(n, {gate.control: 1, gate.target: 0})
        hi = _index(n, {gate.control: 1, gate.target: 1})
        tmp = view[lo].copy()
        view[lo] = view[hi]
        view[hi] = tmp
    elif isinstance(gate, ControlledRY):
        c, s = math.cos(gate.angle / 2), math.sin(gate.angle / 2)
        lo = _index(n, {gate.control: 1, gate.target: 0})
        hi = _index(n, {gate.control: 1, gate.target: 1})
        a0 = view[lo].copy()
        a1 = view[hi].copy()
        view[lo] = c * a0 - s * a1
        view[hi] = s * a0 + c * a1
    else:
        raise TypeError(f"unsupported gate {gate!r}")
    return state


def run_circuit(circuit: CircuitIR) -> StateVector:
    state = zero_state(circuit.n_qubits)
    for gate in circuit.gates:
        apply_gate(state, gate)
    return state


def excitation_probabilities(state: StateVector) -> np.ndarray:
    """Probability of measuring each qubit in |1>."""
    probs = state.probabilities().reshape((2,) * state.n_qubits)
    n = state.n_qubits
    out = np.empty(n)
    for b in range(n):
        out[b] = probs[_index(n, {b: 1})].sum()
    return out


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 stream; the same seed gives the same doubles on every platform."""
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def sample_counts(state: StateVector, shots: int, seed: int) -> ShotHistogram:
    """Draw ``shots`` computational-basis outcomes by inverse-CDF lookup."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    cdf = np.cumsum(probs)
    u = make_rng(seed).random(shots) * cdf[-1]
    outcomes = np.searchsorted(cdf, u, side="right")
    # u * cdf[-1] can round up onto cdf[-1]; never land on a zero-probability tail
    np.minimum(outcomes, np.flatnonzero(probs)[-1], out=outcomes)
    values, counts = np.unique(outcomes, return_counts=True)
    return ShotHistogram(
        shots=shots,
        counts={int(v): int(k) for v, k in zip(values, counts)},
        seed=seed,
        n_qubits=state.n_qubits,
    )


def onehot_residual(state: StateVector) -> float:
    """Probability mass on states with two or more qubits excited.

    The all-zero state is excluded here; see :func:`vacuum_mass`.
    """
    probs = state.probabilities()
    idx = np.arange(probs.size)
    multi = (idx & (idx - 1)) != 0
    return float(probs[multi].sum())


def vacuum_mass(state: StateVector) -> float:
    return float(abs(state.amplitudes[0]) ** 2)
