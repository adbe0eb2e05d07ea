"""LAD regression with leave-one-out detection of leverage points and outliers."""

from ._validation import DataError, Dataset, NumericalError
from .classical import ClassicalDiagnostics, classical_flags, fit_ols
from .datasets import (
    bundled,
    generate_threevariables,
    generate_twovariables,
    load_csv,
)
from .detectors import (
    DetectionReport,
    LeverageDetector,
    OutlierDetector,
    RoundTrace,
    detect_leverage,
    detect_outliers,
)
from .lad import LADRegression, LadFit, brute_force_lad, fit_lad, max_abs_residual_index
from .scores import LeaveOneOutScorer, ScoreTable, compute_scores, score_summary

__version__ = "0.1.0"

__all__ = [
    "ClassicalDiagnostics",
    "DataError",
    "Dataset",
    "DetectionReport",
    "LADRegression",
    "LadFit",
    "LeaveOneOutScorer",
    "LeverageDetector",
    "NumericalError",
    "OutlierDetector",
    "RoundTrace",
    "ScoreTable",
    "brute_force_lad",
    "bundled",
    "classical_flags",
    "compute_scores",
    "detect_leverage",
    "detect_outliers",
    "fit_lad",
    "fit_ols",
    "generate_threevariables",
    "generate_twovariables",
    "load_csv",
    "max_abs_residual_index",
    "score_summary",
]
