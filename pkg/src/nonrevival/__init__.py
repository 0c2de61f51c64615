"""Revival-based resource theory for quantum many-body scars.

Eigenvalues are split into rational and irrational sets; states, unitaries and
observables that revive perfectly at ``2 pi T`` are free. The package provides
the classification, free-object constructions, monotone estimators, OTOC and
decoding-fidelity diagnostics, the weak-measurement recovery protocol, and a
command-line experiment runner.
"""

__version__ = "0.1.0"

from .hamiltonians import (
    HamiltonianSpec,
    Surd,
    SyntheticSpectrum,
    build_hamiltonian,
    build_pxp,
    build_synthetic,
    build_toy_model,
    rescale_qmbs,
)
from .operators import PauliString, SpectralDecomposition, diagonalize, partial_trace, pauli_enumerate
from .protocols import estimate_expectation, haar_twirl_reference, run_recovery, weak_measure
from .resource import (
    Budget,
    FreeUnitarySpec,
    MonotoneEstimate,
    is_free_unitary,
    make_free_state,
    make_free_unitary,
    monotone_D,
    monotone_G,
    monotone_R,
    revival_correlator,
    revival_fidelity,
    revival_fidelity_mixed,
)
from .scrambling import (
    SubsystemPair,
    avg_otoc,
    check_otoc_bound,
    decoding_fidelity,
    otoc,
    pauli_weight_overlap,
)
from .spectral import EigenClassification, check_irrational_spacing, classify, revival_period

__all__ = [
    "HamiltonianSpec", "Surd", "SyntheticSpectrum", "build_hamiltonian", "build_pxp",
    "build_synthetic", "build_toy_model", "rescale_qmbs",
    "PauliString", "SpectralDecomposition", "diagonalize", "partial_trace", "pauli_enumerate",
    "estimate_expectation", "haar_twirl_reference", "run_recovery", "weak_measure",
    "Budget", "FreeUnitarySpec", "MonotoneEstimate", "is_free_unitary", "make_free_state",
    "make_free_unitary", "monotone_D", "monotone_G", "monotone_R", "revival_correlator",
    "revival_fidelity", "revival_fidelity_mixed",
    "SubsystemPair", "avg_otoc", "check_otoc_bound", "decoding_fidelity", "otoc",
    "pauli_weight_overlap",
    "EigenClassification", "check_irrational_spacing", "classify", "revival_period",
]
