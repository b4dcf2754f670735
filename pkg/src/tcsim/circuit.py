"""
Circuit mapping of the single-excitation dynamics onto N + 1 qubits.

Qubits 0..N-1 are the atoms, qubit N is the environment. An X gate
excites atom 1; each atom is then linked to the environment qubit by a
controlled Y-rotation followed by a CNOT, so every two-qubit gate touches
the environment qubit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .analytic import CoefficientVector
from .errors import InconsistentCoefficients, IndexOutOfRange, NaNInput

CLAMP_TOL = 1e-9
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class AngleVector:
    thetas: np.ndarray

    def __post_init__(self):
        thetas = np.asarray(self.thetas, dtype=float)
        if thetas.ndim != 1 or thetas.size == 0:
            raise ValueError("need at least one angle")
        if not 0.0 <= thetas[0] <= math.pi:
            raise ValueError(f"first angle {thetas[0]} outside [0, pi]")
        if np.any(np.abs(thetas[1:]) > math.pi / 2):
            raise ValueError("later angles must lie in [-pi/2, pi/2]")
        object.__setattr__(self, "thetas", thetas)

    @property
    def n_atoms(self) -> int:
        return self.thetas.size


@dataclass(frozen=True)
class PauliX:
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class ControlledRY:
    """Y-rotation by the full angle ``angle`` on target when control is 1."""

    angle: float
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("control and target must differ")
        if not math.isfinite(self.angle):
            raise ValueError("rotation angle must be finite")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise ValueError("control and target must differ")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


Gate = Union[PauliX, ControlledRY, CNOT]


@dataclass(frozen=True)
class CircuitIR:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        gates = tuple(self.gates)
        n_atoms = self.n_qubits - 1
        if n_atoms < 1:
            raise ValueError("circuit needs at least one atom qubit")
        for gate in gates:
            for q in gate.qubits:
                if not 0 <= q < self.n_qubits:
                    raise IndexOutOfRange(f"{gate} addresses qubit outside 0..{n_atoms}")
        kinds = [type(g) for g in gates]
        if (kinds.count(PauliX), kinds.count(ControlledRY), kinds.count(CNOT)) != (
            1,
            n_atoms,
            n_atoms,
        ):
            raise ValueError("expected 1 X, N controlled rotations and N CNOTs")
        object.__setattr__(self, "gates", gates)

    @property
    def env_qubit(self) -> int:
        return self.n_qubits - 1


def angles_from_coefficients(coeffs: CoefficientVector | np.ndarray) -> AngleVector:
    """Rotation angles that prepare the given atomic amplitudes.

    theta_1 = arccos(c_1)
    theta_n = arcsin(c_n / (sin theta_1 * prod_{m=2}^{n-1} cos theta_m))

    The denominator is the amplitude left on the environment qubit before
    atom n is addressed.
    """
    c = np.asarray(getattr(coeffs, "values", coeffs), dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("need a non-empty coefficient vector")
    if not np.all(np.isfinite(c)):
        raise NaNInput("coefficients must be finite")
    norm = math.fsum(c * c)
    if norm > 1.0 + CLAMP_TOL:
        raise InconsistentCoefficients(f"squared norm {norm!r} exceeds 1")

    thetas = np.empty_like(c)
    thetas[0] = math.acos(min(1.0, max(-1.0, c[0])))
    remaining = math.sin(thetas[0])
    for n in range(1, c.size):
        if abs(remaining) < ZERO_TOL and abs(c[n]) < ZERO_TOL:
            thetas[n] = 0.0
            continue
        arg = c[n] / remaining if remaining != 0.0 else math.copysign(math.inf, c[n])
        if abs(arg) > 1.0 + CLAMP_TOL:
            raise InconsistentCoefficients(
                f"coefficient {n + 1} needs sin(theta) = {arg!r}"
            )
        arg = min(1.0, max(-1.0, arg))
        thetas[n] = math.asin(arg)
        remaining *= math.cos(thetas[n])
    return AngleVector(thetas)


def build_circuit(angles: AngleVector) -> CircuitIR:
    n = angles.n_atoms
    env = n
    th = angles.thetas
    gates: list[Gate] = [
        PauliX(0),
        ControlledRY(2.0 * th[0], control=0, target=env),
        CNOT(control=env, target=0),
    ]
    for k in range(1, n):
        gates.append(ControlledRY(2.0 * th[k], control=env, target=k))
        gates.append(CNOT(control=k, target=env))
    return CircuitIR(n + 1, tuple(gates))


def _fmt_angle(x: float) -> str:
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return repr(float(x))


def export_qasm(circuit: CircuitIR, with_measurement: bool = False) -> str:
    """OpenQASM 2.0 source for ``circuit``."""
    n = circuit.n_qubits
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{n}];"]
    if with_measurement:
        lines.append(f"creg c[{n}];")
    for gate in circuit.gates:
        if isinstance(gate, PauliX):
            lines.append(f"x q[{gate.target}];")
        elif isinstance(gate, ControlledRY):
            lines.append(f"cu3({_fmt_angle(gate.angle)},0,0) q[{gate.control}],q[{gate.target}];")
        elif isinstance(gate, CNOT):
            lines.append(f"cx q[{gate.control}],q[{gate.target}];")
        else:
            raise TypeError(f"unknown gate {gate!r}")
    if with_measurement:
        lines.extend(f"measure q[{i}] -> c[{i}];" for i in range(n))
    return "\n".join(lines) + "\n"
