"""Pseudospectral defocusing NLS on a periodic box, with a toolkit of
frequency multipliers, norm diagnostics, and almost-conservation
measurements for frequency-truncated energies."""

from .errors import (
    AtomicIntervalError,
    ConfigError,
    DomainError,
    InstabilityError,
    NlsboxError,
    RepresentationError,
    ResolutionError,
    UndersamplingWarning,
)
from .spectral import (
    Field,
    Grid,
    RadialProfile,
    dealiased_modulus_power,
    dealiased_power,
    forward_transform,
    inverse_transform,
    make_radial_data,
    read_field,
    tail_mass_fraction,
    write_field,
)
from .multipliers import (
    ProjectionBank,
    RadialSymbol,
    apply_symbol,
    fractional_derivative,
    high_pass,
    i_operator_symbol,
    low_pass,
    lp_project,
    smooth_cutoff,
    symbol_to_csv,
)
from .dynamics import (
    EvolutionParams,
    Trajectory,
    default_dt,
    energy,
    evolve,
    linear_flow,
    mass,
    nonlinear_phase,
    read_checkpoint,
    strang_step,
    write_checkpoint,
)
from .norms import (
    DiagnosticSeries,
    MixedNormSpec,
    lebesgue_norm,
    mixed_norm,
    morawetz_quantity,
    sobolev_norm,
    strichartz_admissible,
    weighted_radial_sup,
)
from .imethod import (
    IMethodConfig,
    IncrementLedger,
    LambdaChoice,
    choose_lambda,
    commutator,
    critical_exponent,
    increment_ledger,
    interval_partition,
    modified_energy,
    rescale,
    scattering_diagnostic,
    vanishing_constant,
    vanishing_identity_check,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicIntervalError",
    "ConfigError",
    "DiagnosticSeries",
    "DomainError",
    "EvolutionParams",
    "Field",
    "Grid",
    "IMethodConfig",
    "IncrementLedger",
    "LambdaChoice",
    "MixedNormSpec",
    "InstabilityError",
    "NlsboxError",
    "ProjectionBank",
    "RadialProfile",
    "RadialSymbol",
    "RepresentationError",
    "ResolutionError",
    "Trajectory",
    "UndersamplingWarning",
    "apply_symbol",
    "choose_lambda",
    "commutator",
    "critical_exponent",
    "dealiased_modulus_power",
    "dealiased_power",
    "default_dt",
    "energy",
    "evolve",
    "forward_transform",
    "fractional_derivative",
    "high_pass",
    "i_operator_symbol",
    "increment_ledger",
    "interval_partition",
    "inverse_transform",
    "lebesgue_norm",
    "linear_flow",
    "low_pass",
    "lp_project",
    "make_radial_data",
    "mass",
    "mixed_norm",
    "modified_energy",
    "morawetz_quantity",
    "nonlinear_phase",
    "read_checkpoint",
    "read_field",
    "rescale",
    "scattering_diagnostic",
    "smooth_cutoff",
    "sobolev_norm",
    "strang_step",
    "strichartz_admissible",
    "symbol_to_csv",
    "tail_mass_fraction",
    "vanishing_constant",
    "vanishing_identity_check",
    "weighted_radial_sup",
    "write_checkpoint",
    "write_field",
    "__version__",
]
