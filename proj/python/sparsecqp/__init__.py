"""Sparse recovery from quantized data by concave quadratic programming."""

from ._core import (
    BnbConfig,
    BoundMode,
    ConditionReport,
    DimensionTooLarge,
    Error,
    ExperimentConfig,
    FormatError,
    GammaSet,
    Instance,
    InvalidArgument,
    InvalidDimension,
    MagnitudePrior,
    Method,
    Metrics,
    NumericalFailure,
    Observation,
    Polytope,
    Proposition,
    QuantSpec,
    RankDeficient,
    SaturationError,
    Solution,
    SolveStatus,
    __version__,
    box_polytope,
    build_cqp_polytope,
    build_l1_polytope,
    build_polytope,
    check_prop1,
    check_prop2,
    check_prop3,
    compute_metrics,
    generate,
    is_member,
    max_violation,
    objective_cqp,
    oracle_vertex_min,
    quantize,
    quantize_value,
    refine_on_support,
    run_experiment,
    solve_cqp,
    solve_l1,
    support_of,
    support_threshold,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
