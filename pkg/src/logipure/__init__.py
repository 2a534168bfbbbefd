"""Measurement-based purification of logical qubits from thermal states.

The package simulates a protocol that cools a gapped many-body system
hosting a logical qubit by coupling it to a single auxiliary qubit,
letting the pair evolve, and postselecting on the auxiliary measurement:
a resonant engineered coupling transfers all excited-state weight into
one auxiliary flip, so conditioning on the right outcome leaves the
system in a chosen pure logical state.  Closed-form expressions, the
exact dense pipeline, and a repeated-round (evolve-measure-repeat)
variant for natively coupled spin chains are all included, along with a
CLI that emits figure grids and benchmark reports.
"""

from ._kernels import HAS_NUMBA, NUMBA_ENABLED
from .codes import (
    CARDINAL_ANGLES,
    CodeModel,
    HeisenbergSpec,
    LogicalTarget,
    SpectralSplit,
    build_heisenberg_code,
    build_repetition_code,
    build_stabilizer_code,
    cardinal_state,
    code_from_hamiltonian,
    code_from_json,
    logical_operators,
    logical_state,
    spectral_split,
)
from .emr import (
    CALIBRATED_AUX_ENERGY,
    CHAIN_BENCHMARK,
    KEEP,
    RESET,
    ChainBenchmarkRow,
    EmrTrajectory,
    RoundSpec,
    XYSetup,
    build_xy_setup,
    fast_trajectory,
    find_m_min,
    reproduce_table1,
    run_emr,
    thermal_ensemble,
)
from .formulas import (
    InversionResult,
    a_for_fidelity,
    f_plus_resonant,
    p_beta,
    p_plus_general,
    p_plus_resonant,
)
from .interaction import (
    GROUND_PREP,
    RANK_ONE,
    TARGETED,
    AuxiliarySpec,
    InteractionSpec,
    build_interaction,
    build_total,
    compare_term_lists,
    es_uniform_state,
    joint_target_state,
    pauli_decompose,
    pauli_reconstruct,
    three_qubit_coupling_reference,
)
from .measurement import (
    UNATTAINABLE_P,
    MeasurementSetting,
    PurificationRecord,
    measure_aq,
    projector,
    purify_once,
)
from .operators import (
    PauliString,
    SpectralDecomposition,
    evolve,
    fidelity_pure,
    gibbs,
    hermitian_eig,
    kron,
    kron_all,
    partial_trace,
    pauli_operator,
)
from .thermal import (
    BlockCoefficients,
    Eigenpair,
    ResonanceContext,
    ThermalSpec,
    coupled_eigenpairs,
    evolution_coefficients,
    evolved_joint_state,
    initial_state,
)

__version__ = "0.1.0"

__all__ = [
    "HAS_NUMBA",
    "NUMBA_ENABLED",
    "CARDINAL_ANGLES",
    "CodeModel",
    "HeisenbergSpec",
    "LogicalTarget",
    "SpectralSplit",
    "build_heisenberg_code",
    "build_repetition_code",
    "build_stabilizer_code",
    "cardinal_state",
    "code_from_hamiltonian",
    "code_from_json",
    "logical_operators",
    "logical_state",
    "spectral_split",
    "CALIBRATED_AUX_ENERGY",
    "CHAIN_BENCHMARK",
    "KEEP",
    "RESET",
    "ChainBenchmarkRow",
    "EmrTrajectory",
    "RoundSpec",
    "XYSetup",
    "build_xy_setup",
    "fast_trajectory",
    "find_m_min",
    "reproduce_table1",
    "run_emr",
    "thermal_ensemble",
    "InversionResult",
    "a_for_fidelity",
    "f_plus_resonant",
    "p_beta",
    "p_plus_general",
    "p_plus_resonant",
    "GROUND_PREP",
    "RANK_ONE",
    "TARGETED",
    "AuxiliarySpec",
    "InteractionSpec",
    "build_interaction",
    "build_total",
    "compare_term_lists",
    "es_uniform_state",
    "joint_target_state",
    "pauli_decompose",
    "pauli_reconstruct",
    "three_qubit_coupling_reference",
    "UNATTAINABLE_P",
    "MeasurementSetting",
    "PurificationRecord",
    "measure_aq",
    "projector",
    "purify_once",
    "PauliString",
    "SpectralDecomposition",
    "evolve",
    "fidelity_pure",
    "gibbs",
    "hermitian_eig",
    "kron",
    "kron_all",
    "partial_trace",
    "pauli_operator",
    "BlockCoefficients",
    "Eigenpair",
    "ResonanceContext",
    "ThermalSpec",
    "coupled_eigenpairs",
    "evolution_coefficients",
    "evolved_joint_state",
    "initial_state",
    "__version__",
]
