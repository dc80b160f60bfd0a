"""Classical simulation and estimation of fermionic dynamical correlation
functions via shadow-tomography measurement protocols."""

from .config import ExperimentConfig, ModelSpec, RequestConfig, ShotsConfig, SweepConfig
from .fast import (
    BranchSelection,
    CorrelationEstimate,
    ShotBudget,
    choose_regime,
    fast1,
    fast2,
    general_correlation,
    majority_select,
    reformulate_anticommutator,
    reformulate_commutator,
)
from .mapping import (
    FermionOperator,
    MajoranaBasis,
    MappingKind,
    annihilation,
    creation,
    current,
    encode,
    hopping,
    majorana_basis,
    number,
    one_body_observables,
)
from .pauli import PauliString, build_commutation_graph, commutes, greedy_color, multiply
from .sim import (
    AncillaOutcome,
    Hamiltonian,
    MeasurementRecord,
    StateVector,
    apply_pauli_rotation,
    evolve,
    measure_commuting_set,
    prepare_rho_pm,
    random_pauli_shot,
)

__version__ = "0.1.0"

__all__ = [
    "AncillaOutcome",
    "BranchSelection",
    "CorrelationEstimate",
    "ExperimentConfig",
    "FermionOperator",
    "Hamiltonian",
    "MajoranaBasis",
    "MappingKind",
    "MeasurementRecord",
    "ModelSpec",
    "PauliString",
    "RequestConfig",
    "ShotBudget",
    "ShotsConfig",
    "StateVector",
    "SweepConfig",
    "annihilation",
    "apply_pauli_rotation",
    "build_commutation_graph",
    "choose_regime",
    "commutes",
    "creation",
    "current",
    "encode",
    "evolve",
    "fast1",
    "fast2",
    "general_correlation",
    "greedy_color",
    "hopping",
    "majorana_basis",
    "majority_select",
    "measure_commuting_set",
    "multiply",
    "number",
    "one_body_observables",
    "prepare_rho_pm",
    "random_pauli_shot",
]
