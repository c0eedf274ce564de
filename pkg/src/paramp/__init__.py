"""Exact Fock-space simulation of beam splitters and parametric amplifiers.

The Hamiltonians of all three devices conserve photon-number-like charges,
so the dynamics block-diagonalizes over finite invariant subspaces; each
block is diagonalized once and reused for every interaction time.  On top of
the exact propagation the package evaluates how well the classical-pump
(parametric) approximation holds: state overlaps, pump Fano factors,
depletion, photon statistics and Wigner functions.
"""

from .blocks import BlockOperator, assemble, eigendecompose
from .experiments import (
    ExperimentConfig,
    ExperimentRecord,
    FanoScanReport,
    SweepEngine,
    UnboundedError,
    default_tau_max,
    fano_criterion_scan,
    max_parameter,
    records_to_csv,
    standard_scan_configs,
    sweep,
    tau_star,
)
from .fock import (
    BlockDecomposition,
    DeviceKind,
    InvariantBlock,
    charge_of,
    decompose,
    enumerate_fock_vectors,
)
from .observables import (
    PhotonStats,
    ReducedDensity,
    WignerGrid,
    depletion,
    mode_mean,
    number_distribution,
    overlap,
    partial_trace,
    photon_stats,
    pure_state_overlap,
    quadrature_distribution,
    wigner,
)
from .propagate import EvolutionPlan, evolve, heisenberg_bs_oracle
from .states import (
    MultiModeState,
    SingleModeSpec,
    TruncationError,
    coherent_coefficients,
    default_max_charge,
    default_pump_cutoff,
    parse_mode_spec,
    product_state,
)
from .targets import (
    check_sufficient_conditions,
    crude_displacement_parameter,
    displaced_state,
    displacement_parameter,
    squeeze_parameter,
    squeezed_state,
    twin_beam,
    twin_parameter,
    two_mode_squeezed,
)

__version__ = "0.1.0"

__all__ = [
    "BlockDecomposition",
    "BlockOperator",
    "DeviceKind",
    "EvolutionPlan",
    "ExperimentConfig",
    "ExperimentRecord",
    "FanoScanReport",
    "InvariantBlock",
    "MultiModeState",
    "PhotonStats",
    "ReducedDensity",
    "SingleModeSpec",
    "SweepEngine",
    "TruncationError",
    "UnboundedError",
    "WignerGrid",
    "assemble",
    "charge_of",
    "check_sufficient_conditions",
    "coherent_coefficients",
    "crude_displacement_parameter",
    "decompose",
    "default_max_charge",
    "default_pump_cutoff",
    "default_tau_max",
    "depletion",
    "displaced_state",
    "displacement_parameter",
    "eigendecompose",
    "enumerate_fock_vectors",
    "evolve",
    "fano_criterion_scan",
    "heisenberg_bs_oracle",
    "max_parameter",
    "mode_mean",
    "number_distribution",
    "overlap",
    "parse_mode_spec",
    "partial_trace",
    "photon_stats",
    "product_state",
    "pure_state_overlap",
    "quadrature_distribution",
    "records_to_csv",
    "squeeze_parameter",
    "squeezed_state",
    "standard_scan_configs",
    "sweep",
    "tau_star",
    "twin_beam",
    "twin_parameter",
    "two_mode_squeezed",
    "wigner",
]
