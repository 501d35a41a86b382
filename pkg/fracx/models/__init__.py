from .schema import (
    BilinearFractionalProgram,
    FractionalProgram,
    Ratio,
    ReportRow,
    Sense,
    SuiteConfig,
    SummaryRow,
    UnivariateInstance,
    ValidationIssue,
    ValidationReport,
    VarKind,
)

__all__ = [
    "BilinearFractionalProgram",
    "FractionalProgram",
    "Ratio",
    "ReportRow",
    "Sense",
    "SuiteConfig",
    "SummaryRow",
    "UnivariateInstance",
    "ValidationIssue",
    "ValidationReport",
    "VarKind",
]
