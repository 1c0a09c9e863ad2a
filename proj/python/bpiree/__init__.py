from ._bpiree import (
    ConfigError,
    Instance,
    IoError,
    NumericalFailure,
    Penalty,
    Problem,
    SolveResult,
    SolverConfig,
    TraceRecord,
    UnsupportedOperation,
    algorithms,
    block_prox_step,
    compare,
    extrapolation_bound,
    generate,
    normalize_config,
    prox_weighted_abs,
    solve,
)

__all__ = [
    "ConfigError",
    "Instance",
    "IoError",
    "NumericalFailure",
    "Penalty",
    "Problem",
    "SolveResult",
    "SolverConfig",
    "TraceRecord",
    "UnsupportedOperation",
    "algorithms",
    "block_prox_step",
    "compare",
    "extrapolation_bound",
    "generate",
    "normalize_config",
    "prox_weighted_abs",
    "solve",
]
