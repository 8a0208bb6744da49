"""Steady states and transport of a boundary-driven, dephased fermion chain.

The package solves the Lindblad master equation for an interacting
spinless-fermion chain attached to biased particle reservoirs at its
ends, with optional bulk dephasing and a staggered field. Exact
solvers vectorize the generator and extract its kernel; a
matrix-product engine time-evolves the density operator for chains
beyond exact reach; closed-form predictions, a companion few-level
model, and sweep and fitting utilities support the transport
analysis. The `drivenchain` console script exposes all of it.
"""

from .analysis import (
    AnalysisError,
    FitResult,
    SweepConfig,
    correlation_profile,
    diffusion_check,
    diffusion_table,
    estimate_delta_threshold,
    find_gamma_opt,
    fit_power_law,
    run_sweep,
)
from .basis import particle_numbers, sector_indices
from .liouville import (
    ConvergenceReport,
    DegenerateKernelError,
    NonConvergenceError,
    evolve_to_ness,
    ness_nullspace,
    steady_state,
    vectorize,
)
from .mpo import (
    EvolutionSchedule,
    MpoState,
    TruncationPolicy,
    load_checkpoint,
    measure_mpo,
    mpo_from_product,
    mpo_identity,
    mpo_to_dense,
    mpo_trace,
    run_to_ness_mpo,
    save_checkpoint,
    trotter_sweep,
)
from .observables import ObservableRecord, measure, smallest_eigenvalue, trace_distance
from .operators import (
    build_hamiltonian,
    build_jump_operators,
    current_operator,
    kinetic_operator,
    total_number_operator,
)
from .output import CsvReport, write_csv, write_json
from .parameters import ChainParameters, ToyParameters
from .predictions import (
    delta0_current,
    domain_deviation,
    localization_length,
    purity_prediction,
    sector_probs_closed_form,
    sector_probs_detailed_balance,
)
from .spectra import domain_state_deviation, sector_spectrum
from .toy import (
    correspondence_check,
    dark_state_overlap,
    toy_closed_form,
    toy_current_operator,
    toy_dark_state,
    toy_generator,
    toy_hamiltonian,
    toy_jump_operators,
    toy_ness_current,
    toy_steady_state,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AnalysisError",
    "ChainParameters",
    "ConvergenceReport",
    "CsvReport",
    "DegenerateKernelError",
    "EvolutionSchedule",
    "FitResult",
    "MpoState",
    "NonConvergenceError",
    "ObservableRecord",
    "SweepConfig",
    "ToyParameters",
    "TruncationPolicy",
    "build_hamiltonian",
    "build_jump_operators",
    "correlation_profile",
    "correspondence_check",
    "current_operator",
    "dark_state_overlap",
    "delta0_current",
    "diffusion_check",
    "diffusion_table",
    "domain_deviation",
    "domain_state_deviation",
    "estimate_delta_threshold",
    "evolve_to_ness",
    "find_gamma_opt",
    "fit_power_law",
    "kinetic_operator",
    "load_checkpoint",
    "localization_length",
    "measure",
    "measure_mpo",
    "mpo_from_product",
    "mpo_identity",
    "mpo_to_dense",
    "mpo_trace",
    "ness_nullspace",
    "particle_numbers",
    "purity_prediction",
    "run_sweep",
    "run_to_ness_mpo",
    "save_checkpoint",
    "sector_indices",
    "sector_probs_closed_form",
    "sector_probs_detailed_balance",
    "sector_spectrum",
    "smallest_eigenvalue",
    "steady_state",
    "toy_closed_form",
    "toy_current_operator",
    "toy_dark_state",
    "toy_generator",
    "toy_hamiltonian",
    "toy_jump_operators",
    "toy_ness_current",
    "toy_steady_state",
    "total_number_operator",
    "trace_distance",
    "trotter_sweep",
    "vectorize",
    "write_csv",
    "write_json",
]
