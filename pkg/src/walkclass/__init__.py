"""Classification toolkit for weighted small-step walks in the quarter plane.

The package decides, for a weight table on the eight compass steps plus the
stationary one, whether the generating function of confined walks is
algebraic, holonomic without being algebraic, or differentially
transcendental, and flags the degenerate and genus-zero weight patterns that
fall outside the elliptic pipeline.
"""
from .model import (
    AllZeroWeights,
    MalformedRational,
    ModelError,
    NegativeWeight,
    PatternClass,
    WeightTable,
    pattern_class,
    drift,
    parse_model,
)
from .kernel import GenusTag, KernelContext, KernelError, genus
from .curve import BranchPoints, CurveError, branch_points, unit_circle_paths
from .uniformization import (
    Uniformization,
    UniformizationError,
    tau_order_on_curve,
    uniformize,
)
from .group import (
    GroupError,
    GroupReport,
    OrbitSumVerdict,
    fixed_point_rationality,
    group_report,
    orbit_sum_on_curve,
)
from .series import (
    CriticalPoint,
    SeriesError,
    SeriesTruncation,
    continuation_residual,
    critical_t,
    verify_functional_equation,
    walk_dp,
)
from .classify import (
    ClassificationReport,
    Evidence,
    Verdict,
    classify,
    emit_csv,
    emit_report,
)

__version__ = "0.1.0"

__all__ = [
    "AllZeroWeights",
    "BranchPoints",
    "ClassificationReport",
    "CriticalPoint",
    "CurveError",
    "Evidence",
    "GenusTag",
    "GroupError",
    "GroupReport",
    "KernelContext",
    "KernelError",
    "MalformedRational",
    "ModelError",
    "NegativeWeight",
    "OrbitSumVerdict",
    "PatternClass",
    "SeriesError",
    "SeriesTruncation",
    "Uniformization",
    "UniformizationError",
    "Verdict",
    "WeightTable",
    "branch_points",
    "classify",
    "pattern_class",
    "continuation_residual",
    "critical_t",
    "drift",
    "emit_csv",
    "emit_report",
    "fixed_point_rationality",
    "group_report",
    "genus",
    "orbit_sum_on_curve",
    "parse_model",
    "tau_order_on_curve",
    "uniformize",
    "unit_circle_paths",
    "verify_functional_equation",
    "walk_dp",
    "__version__",
]
