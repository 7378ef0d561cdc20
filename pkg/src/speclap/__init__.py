"""Spectral calculus and function-space tooling for masked-grid Dirichlet Laplacians."""

__version__ = "0.1.0"

from .grid import (
    GridDomain,
    GridFunction,
    SpectralDecomposition,
    DisconnectedMaskError,
    build_domain,
    load_mask_file,
    write_mask_file,
    assemble_laplacian,
    eigendecompose,
    heat_kernel,
    heat_apply,
)
from .calculus import (
    DyadicPartition,
    MultiplierProfile,
    make_dyadic_partition,
    apply_multiplier,
    lp_block,
    low_block,
    fractional_power,
    shifted_power,
    resolvent_apply,
    operator_matrix,
    operator_norm,
    multiplier_norm,
)
from .subordination import (
    SubordinatorSpec,
    SemigroupPlan,
    QuadratureError,
    make_plan,
    subordinator_density,
    subordinator_mass,
    subordinated_profile,
    subordinated_semigroup,
    direct_semigroup,
)
from .spaces import (
    NormSpec,
    lp_norm,
    sobolev_norm,
    besov_norm,
    seminorm_pm,
    seminorm_qm,
    duality_pairing,
    evaluate_norm,
    conjugate_exponent,
)
from .harness import (
    CheckReport,
    SpectralContext,
    RandomFunctionEnsemble,
    GNIndices,
    GNValidation,
    SplitCertificate,
    build_context,
    make_ensemble,
    validate_gn_indices,
    gn_split_certificate,
    CHECKS,
    run_check,
)
from .reporting import (
    CheckSpec,
    ConfigError,
    ExperimentConfig,
    SuiteReport,
    default_config,
    emit_plotdata,
    emit_report,
    parse_config,
    parse_config_file,
    run_suite,
    suite_from_json,
)

__all__ = [
    "GridDomain",
    "GridFunction",
    "SpectralDecomposition",
    "DisconnectedMaskError",
    "build_domain",
    "load_mask_file",
    "write_mask_file",
    "assemble_laplacian",
    "eigendecompose",
    "heat_kernel",
    "heat_apply",
    "DyadicPartition",
    "MultiplierProfile",
    "make_dyadic_partition",
    "apply_multiplier",
    "lp_block",
    "low_block",
    "fractional_power",
    "shifted_power",
    "resolvent_apply",
    "operator_matrix",
    "operator_norm",
    "multiplier_norm",
    "SubordinatorSpec",
    "SemigroupPlan",
    "QuadratureError",
    "make_plan",
    "subordinator_density",
    "subordinator_mass",
    "subordinated_profile",
    "subordinated_semigroup",
    "direct_semigroup",
    "NormSpec",
    "lp_norm",
    "sobolev_norm",
    "besov_norm",
    "seminorm_pm",
    "seminorm_qm",
    "duality_pairing",
    "evaluate_norm",
    "conjugate_exponent",
    "CheckReport",
    "SpectralContext",
    "RandomFunctionEnsemble",
    "GNIndices",
    "GNValidation",
    "SplitCertificate",
    "build_context",
    "make_ensemble",
    "validate_gn_indices",
    "gn_split_certificate",
    "CHECKS",
    "run_check",
    "CheckSpec",
    "ConfigError",
    "ExperimentConfig",
    "SuiteReport",
    "default_config",
    "emit_plotdata",
    "emit_report",
    "parse_config",
    "parse_config_file",
    "run_suite",
    "suite_from_json",
    "__version__",
]
