"""Simulation and statistics for an entangled-control quantum switch
violating a four-party causal-order inequality."""

from .inequality import (
    CLASSICAL_BOUND,
    QUANTUM_MAX,
    DeterministicStrategy,
    ScenarioValue,
    classical_bound,
    vbc_value,
)
from .kraus import NoiseParams, ProbabilityTable, behavior, switch_branch, werner_state
from .linalg import DensityMatrix, PureState, fidelity_to_pure, partial_trace, purity, tensor
from .montecarlo import McReport, estimate, report, run_list, sample_counts
from .process_matrix import ProcessMatrix, born_rule, build_w_switch, mix_w, switch_fidelity
from .sweep import epsilon_of_fidelity, eta_of_purity, sweep

__version__ = "0.1.0"

__all__ = [
    "CLASSICAL_BOUND",
    "QUANTUM_MAX",
    "DeterministicStrategy",
    "ScenarioValue",
    "classical_bound",
    "vbc_value",
    "NoiseParams",
    "ProbabilityTable",
    "behavior",
    "switch_branch",
    "werner_state",
    "DensityMatrix",
    "PureState",
    "fidelity_to_pure",
    "partial_trace",
    "purity",
    "tensor",
    "McReport",
    "estimate",
    "report",
    "run_list",
    "sample_counts",
    "ProcessMatrix",
    "born_rule",
    "build_w_switch",
    "mix_w",
    "switch_fidelity",
    "epsilon_of_fidelity",
    "eta_of_purity",
    "sweep",
    "__version__",
]
