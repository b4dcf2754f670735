"""Simulation and cross-validation toolkit for the singly-excited open
Tavis-Cummings model."""

from .analytic import (
    CoefficientVector,
    CouplingRegime,
    PopulationVector,
    Regime,
    SplittingConstant,
    TCParams,
    coefficients,
    coupling_regime,
    envelope_E,
    first_atom_excited,
    hamming_level_diag,
    populations,
    splitting_D,
    steady_state_coefficients,
)
from .circuit import (
    CNOT,
    AngleVector,
    CircuitIR,
    ControlledRY,
    PauliX,
    angles_from_coefficients,
    build_circuit,
    export_qasm,
)
from .statevector import (
    ShotHistogram,
    StateVector,
    apply_gate,
    excitation_probabilities,
    onehot_residual,
    run_circuit,
    sample_counts,
    zero_state,
)

__version__ = "0.1.0"
