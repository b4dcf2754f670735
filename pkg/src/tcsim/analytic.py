"""
Closed-form dynamics of N resonant two-level atoms in a lossy cavity,
restricted to a single shared excitation.

Every atomic amplitude is the initial value minus a share of the decaying
bright mode:

    c_n(t) = c_n(0) - (B0 / N) * (1 - E(t)),    B0 = sum_m c_m(0)

    E(t) = exp(-kappa t / 4) * ((kappa / D) sinh(D t / 4) + cosh(D t / 4))
    D    = sqrt(kappa**2 - 16 N g**2)

All rates are angular frequencies and time is their inverse. Evaluation
costs O(N) per time point.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateLimitUnstable,
    InvalidParams,
    NoSteadyState,
    SizeLimitExceeded,
)

NORM_TOL = 1e-12
IMAG_TOL = 1e-12
# |D t / 4| below this switches E(t) to its power series in (D t / 4)**2.
SERIES_THRESHOLD = 1e-2
_SERIES_MAX_TERMS = 30
HAMMING_MAX_ATOMS = 20


@dataclass(frozen=True)
class TCParams:
    """Physical configuration of the open Tavis-Cummings system.

    Parameters
    ----------
    n_atoms : int
        Number of atoms N >= 1.
    g : float
        Single-atom coupling rate.
    kappa : float
        Cavity loss rate.
    initial_coeffs : sequence of float
        Real amplitudes c_n(0), normalised to one. Negative values are
        accepted; the closed form does not rely on positivity.
    """

    n_atoms: int
    g: float
    kappa: float
    initial_coeffs: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if isinstance(self.n_atoms, bool) or not isinstance(self.n_atoms, (int, np.integer)):
            raise InvalidParams(f"n_atoms must be an integer, got {self.n_atoms!r}")
        if self.n_atoms < 1:
            raise InvalidParams(f"n_atoms must be >= 1, got {self.n_atoms}")
        for name in ("g", "kappa"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidParams(f"{name} must be finite and >= 0, got {value!r}")
        coeffs = self.initial_coeffs
        if len(coeffs) == 0:
            coeffs = first_atom_excited(self.n_atoms)
        coeffs = tuple(float(c) for c in coeffs)
        if len(coeffs) != self.n_atoms:
            raise InvalidParams(
                f"expected {self.n_atoms} initial coefficients, got {len(coeffs)}"
            )
        if not all(math.isfinite(c) for c in coeffs):
            raise InvalidParams("initial coefficients must be finite")
        norm = math.fsum(c * c for c in coeffs)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidParams(f"initial coefficients have squared norm {norm!r}, expected 1")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "kappa", float(self.kappa))
        object.__setattr__(self, "initial_coeffs", coeffs)

    @property
    def collective_rate(self) -> float:
        return self.g * math.sqrt(self.n_atoms)

    @property
    def c0(self) -> np.ndarray:
        return np.array(self.initial_coeffs, dtype=float)


def first_atom_excited(n_atoms: int) -> tuple[float, ...]:
    """Initial coefficients with the excitation on atom 1."""
    return (1.0,) + (0.0,) * (int(n_atoms) - 1)


@dataclass(frozen=True)
class SplittingConstant:
    value: complex


@dataclass(frozen=True)
class CoefficientVector:
    t: float
    values: np.ndarray


@dataclass(frozen=True)
class PopulationVector:
    t: float
    atom_populations: np.ndarray
    ground_population: float

    def as_array(self) -> np.ndarray:
        """Atom populations followed by the ground population."""
        return np.append(self.atom_populations, self.ground_population)


class Regime(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


@dataclass(frozen=True)
class CouplingRegime:
    regime: Regime
    collective_rate: float


def splitting_D(params: TCParams) -> SplittingConstant:
    """Principal complex square root of kappa**2 - 16 N g**2."""
    radicand = params.kappa**2 - 16.0 * params.n_atoms * params.g**2
    return SplittingConstant(cmath.sqrt(complex(radicand, 0.0)))


def _series_envelope(a: float, x2: complex) -> complex:
    # cosh(x) + a * sinh(x) / x, summed as power series in x**2
    cosh_sum = 0j
    sinhc_sum = 0j
    term = 1 + 0j  # x2**k / (2k)!
    for k in range(_SERIES_MAX_TERMS):
        cosh_term = term
        sinhc_term = term / (2 * k + 1)
        cosh_sum += cosh_term
        sinhc_sum += sinhc_term
        scale = abs(cosh_sum) + a * abs(sinhc_sum)
        if abs(cosh_term) + a * abs(sinhc_term) <= 1e-17 * scale:
            return cosh_sum + a * sinhc_sum
        term = term * x2 / ((2 * k + 1) * (2 * k + 2))
    raise DegenerateLimitUnstable(
        f"envelope series did not converge for (Dt/4)**2 = {x2!r}"
    )


def envelope_E(params: TCParams, t: float) -> float:
    """Bright-mode envelope E(t).

    Evaluated in complex arithmetic for both weak (real D) and strong
    (imaginary D) coupling. The result must be real to within 1e-12.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    D = splitting_D(params).value
    a = params.kappa * t / 4.0
    x = D * t / 4.0
    if abs(x) < SERIES_THRESHOLD:
        value = math.exp(-a) * _series_envelope(a, x * x)
    else:
        r = a / x
        value = 0.5 * ((1 + r) * cmath.exp(x - a) + (1 - r) * cmath.exp(-x - a))
    if abs(value.imag) > IMAG_TOL:
        raise FloatingPointError(
            f"envelope has imaginary residue {value.imag!r} at t={t}"
        )
    return value.real


def coefficients(params: TCParams, t: float) -> CoefficientVector:
    c0 = params.c0
    bright = math.fsum(params.initial_coeffs) / params.n_atoms
    values = c0 - bright * (1.0 - envelope_E(params, t))
    return CoefficientVector(float(t), values)


def _populations_from(coeffs: CoefficientVector) -> PopulationVector:
    p = coeffs.values**2
    return PopulationVector(coeffs.t, p, 1.0 - math.fsum(p))


def populations(params: TCParams, t: float) -> PopulationVector:
    return _populations_from(coefficients(params, t))


def steady_state_coefficients(params: TCParams) -> CoefficientVector:
    """Long-time limit: the dark component of the initial amplitudes survives."""
    if params.g == 0 or params.kappa == 0:
        raise NoSteadyState("the envelope only decays when g > 0 and kappa > 0")
    bright = math.fsum(params.initial_coeffs) / params.n_atoms
    return CoefficientVector(math.inf, params.c0 - bright)


def coupling_regime(params: TCParams) -> CouplingRegime:
    rate = params.collective_rate
    regime = Regime.WEAK if rate < params.kappa / 4.0 else Regime.STRONG
    return CouplingRegime(regime, rate)


def hamming_level_diag(n_atoms: int) -> np.ndarray:
    """Diagonal of the collective S_z: N/2 minus the Hamming weight of p - 1."""
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    if n_atoms > HAMMING_MAX_ATOMS:
        raise SizeLimitExceeded(f"n_atoms={n_atoms} exceeds {HAMMING_MAX_ATOMS}")
    idx = np.arange(2**n_atoms, dtype=np.int64)
    weight = np.zeros_like(idx)
    for bit in range(n_atoms):
        weight += (idx >> bit) & 1
    return n_atoms / 2.0 - weight.astype(float)
