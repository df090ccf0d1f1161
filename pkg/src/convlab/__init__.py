"""convlab: a workbench that pits inference methods against graded
convergence-to-the-truth standards on four benchmark problems."""

from .framework import (
    AsymptoticOracle,
    ConfigurationError,
    ConvergenceRecord,
    MethodSpec,
    ModeReport,
    OracleContradiction,
    Status,
    StreamError,
    StreamTrace,
    Verdict,
    apply_method,
    check_stability,
    classify_convergence,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticOracle",
    "ConfigurationError",
    "ConvergenceRecord",
    "MethodSpec",
    "ModeReport",
    "OracleContradiction",
    "Status",
    "StreamError",
    "StreamTrace",
    "Verdict",
    "apply_method",
    "check_stability",
    "classify_convergence",
    "__version__",
]
