"""Least-squares comparator: hat-matrix leverage and studentized residuals.

An observation is a leverage point when ``h_ii > 2(p+1)/n``. It is an outlier
when ``r_i / (sigma * sqrt(1 - h_ii)) > 2``. The outlier test compares the
absolute value by default (``outlier_rule="two-sided"``). ``"one-sided"``
compares the signed ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import DataError, as_dataset, design_matrix

OUTLIER_RULES = ("two-sided", "one-sided")
STUDENT_CUTOFF = 2.0


@dataclass(frozen=True)
class OlsFit:
    beta: np.ndarray
    residuals: np.ndarray
    sigma_hat: float
    h_diag: np.ndarray


@dataclass(frozen=True)
class ClassicalReport:
    labels: np.ndarray
    h_diag: np.ndarray
    student_res: np.ndarray
    sigma_hat: float
    leverage_cutoff: float
    leverage_flags: tuple
    outlier_flags: tuple
    outlier_rule: str
    undefined: tuple = ()

    def to_dict(self) -> dict:
        return {
            "h_diag": self.h_diag.tolist(),
            "student_res": [None if np.isnan(v) else float(v) for v in self.student_res],
            "sigma_hat": self.sigma_hat,
            "leverage_cutoff": self.leverage_cutoff,
            "leverage_flags": list(self.leverage_flags),
            "outlier_flags": list(self.outlier_flags),
            "outlier_rule": self.outlier_rule,
            "undefined": list(self.undefined),
        }


def fit_ols(data, y=None) -> OlsFit:
    """Least squares with intercept, through a thin QR factorisation.

    ``sigma_hat`` is ``sqrt(RSS / (n - p - 1))``; ``h_diag`` is the squared
    row norm of ``Q``.
    """
    data = as_dataset(data, y)
    design = design_matrix(data.x)
    n, q = design.shape
    if n <= q:
        raise DataError(f"least squares needs n > p + 1, got n={n}, p={q - 1}")
    Q, R = np.linalg.qr(design)
    diag = np.abs(np.diag(R))
    if diag.min() <= 1e-12 * max(diag.max(), 1.0) * n:
        raise DataError("design matrix (with intercept) is rank deficient")
    beta = np.linalg.solve(R, Q.T @ data.y)
    residuals = data.y - design @ beta
    rss = float(residuals @ residuals)
    return OlsFit(beta, residuals, float(np.sqrt(rss / (n - q))), np.sum(Q * Q, axis=1))


def classical_flags(data, y=None, outlier_rule="two-sided") -> ClassicalReport:
    """Hat-diagonal and studentized-residual flags.

    Observations with ``h_ii`` at 1 have no studentized residual; they are
    reported in ``undefined`` and never flagged as outliers.
    """
    if outlier_rule not in OUTLIER_RULES:
        raise ValueError(f"outlier_rule must be one of {OUTLIER_RULES}")
    data = as_dataset(data, y)
    ols = fit_ols(data)
    n, q = data.n, data.p + 1
    cutoff = 2.0 * q / n
    h = ols.h_diag
    slack = 1.0 - h
    undefined = slack <= 1e-12
    with np.errstate(divide="ignore", invalid="ignore"):
        student = ols.residuals / (ols.sigma_hat * np.sqrt(np.where(undefined, np.nan, slack)))
    if ols.sigma_hat == 0.0:
        student = np.where(np.abs(ols.residuals) > 0, np.nan, 0.0)
    stat = np.abs(student) if outlier_rule == "two-sided" else student
    labels = data.labels
    lev = labels[h > cutoff]
    out = labels[np.nan_to_num(stat, nan=-np.inf) > STUDENT_CUTOFF]
    return ClassicalReport(
        labels=labels,
        h_diag=h,
        student_res=student,
        sigma_hat=ols.sigma_hat,
        leverage_cutoff=cutoff,
        leverage_flags=tuple(lev.tolist()),
        outlier_flags=tuple(out.tolist()),
        outlier_rule=outlier_rule,
        undefined=tuple(labels[undefined].tolist()),
    )


class ClassicalDiagnostics(BaseEstimator):
    """Estimator form of :func:`classical_flags`.

    Attributes
    ----------
    coef_, intercept_
        Least-squares fit.
    hat_ : ndarray of shape (n,)
    studentized_residuals_ : ndarray of shape (n,)
    leverage_flags_, outlier_flags_ : ndarray
        0-based row positions.
    """

    def __init__(self, outlier_rule="two-sided"):
        self.outlier_rule = outlier_rule

    def fit(self, X, y):
        data = as_dataset(X, y)
        report = classical_flags(data, outlier_rule=self.outlier_rule)
        ols = fit_ols(data)
        self.intercept_ = float(ols.beta[0])
        self.coef_ = ols.beta[1:]
        self.sigma_ = report.sigma_hat
        self.hat_ = report.h_diag
        self.studentized_residuals_ = report.student_res
        self.leverage_flags_ = np.array([data.position_of(l) for l in report.leverage_flags], dtype=int)
        self.outlier_flags_ = np.array([data.position_of(l) for l in report.outlier_flags], dtype=int)
        self.n_features_in_ = data.p
        return self
