"""Single-excitation dissipative dynamics of chirally coupled atom chains.

The package simulates how one shared excitation decays out of a chain of
two-level atoms coupled to a one-dimensional reservoir with independently
tunable left- and right-propagating emission rates, and provides the
resonant dipole-dipole coupling kernels for 1D (chiral and reciprocal),
2D, and 3D reservoirs in a common convention.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .analysis import (
    BURST_PROMINENCE_FRACTION,
    BURST_WINDOW,
    MIN_POINTS_PER_UNIT_TIME,
    PLATEAU_EPS_RATE,
    PLATEAU_MIN_DURATION,
    PLATEAU_POPULATION_FLOOR,
    PLATEAU_WINDOW,
    BurstPeak,
    BurstReport,
    EnsembleResult,
    PlateauInterval,
    PlateauReport,
    detect_bursts,
    detect_plateaus,
    fit_decay_rate,
    localization_metric,
    run_ensemble,
)
from .chain import (
    ChainConfig,
    CouplingMatrix,
    DisorderSpec,
    build_chain,
    build_coupling_matrix,
    build_positions,
    load_config_file,
    parse_config_text,
)
from .dynamics import (
    StateVector,
    SteadyStateResult,
    Trajectory,
    intensity,
    log_grid,
    long_time_populations,
    propagate,
    rk_propagate,
    steady_state,
    uniform_excitation,
    uniform_grid,
    write_trajectory_csv,
    write_trajectory_json,
)
from .errors import (
    ChiralChainError,
    ConfigError,
    DomainError,
    FitError,
    IntegrityError,
    NumericsError,
    ResolutionError,
)
from .kernels import (
    DipoleGeometry,
    KernelValue,
    chiral_fg,
    kernel_1d_reciprocal,
    kernel_2d,
    kernel_3d,
)
from .oracles import DarkModesN3, cascaded_n2, cascaded_n3, dark_modes_n3
from .specfun import (
    PVIntegrand,
    bessel_j,
    bessel_y,
    oscillatory_integral,
    principal_value,
    struve_h,
)

__all__ = [
    "BURST_PROMINENCE_FRACTION",
    "BURST_WINDOW",
    "BurstPeak",
    "BurstReport",
    "ChainConfig",
    "ChiralChainError",
    "ConfigError",
    "CouplingMatrix",
    "DarkModesN3",
    "DipoleGeometry",
    "DisorderSpec",
    "DomainError",
    "EnsembleResult",
    "FitError",
    "IntegrityError",
    "KernelValue",
    "MIN_POINTS_PER_UNIT_TIME",
    "NumericsError",
    "PLATEAU_EPS_RATE",
    "PLATEAU_MIN_DURATION",
    "PLATEAU_POPULATION_FLOOR",
    "PLATEAU_WINDOW",
    "PVIntegrand",
    "PlateauInterval",
    "PlateauReport",
    "ResolutionError",
    "StateVector",
    "SteadyStateResult",
    "Trajectory",
    "__version__",
    "bessel_j",
    "bessel_y",
    "build_chain",
    "build_coupling_matrix",
    "build_positions",
    "cascaded_n2",
    "cascaded_n3",
    "chiral_fg",
    "dark_modes_n3",
    "detect_bursts",
    "detect_plateaus",
    "fit_decay_rate",
    "intensity",
    "kernel_1d_reciprocal",
    "kernel_2d",
    "kernel_3d",
    "load_config_file",
    "localization_metric",
    "log_grid",
    "long_time_populations",
    "oscillatory_integral",
    "parse_config_text",
    "principal_value",
    "propagate",
    "rk_propagate",
    "run_ensemble",
    "steady_state",
    "struve_h",
    "uniform_excitation",
    "uniform_grid",
    "write_trajectory_csv",
    "write_trajectory_json",
]
