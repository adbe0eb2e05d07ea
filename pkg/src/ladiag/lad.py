"""Least absolute deviations (L1) regression.

The fit minimises ``sum_i |y_i - b0 - sum_j b_j x_ij|`` through the linear
program

    minimise    sum(u) + sum(v)
    subject to  X b + u - v = y,   u, v >= 0,   b free

solved with a dense primal simplex tableau. The intercept and slopes are
pivoted into the basis first and never leave it; the remaining iterations use
Bland's smallest-index rule, so the vertex reached is a deterministic function
of the input. Observations whose residual variables are both nonbasic at the
final vertex are the ``p + 1`` points the hyperplane passes through.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    DataError,
    Dataset,
    NumericalError,
    as_dataset,
    check_predictors,
    design_matrix,
    require_size,
)

BRUTE_FORCE_MAX_N = 15
BRUTE_FORCE_MAX_P = 3

_REDUCED_COST_TOL = 1e-9


def zero_tolerance(y) -> float:
    """Scale-relative threshold below which a residual counts as zero."""
    return 1e-8 * (1.0 + float(np.max(np.abs(y))))


@dataclass(frozen=True)
class LadFit:
    """A fitted LAD hyperplane.

    ``basis`` holds the labels of the observations the hyperplane passes
    through, in increasing position order. ``basis_positions`` holds the same
    observations as 0-based row positions.
    """

    beta: np.ndarray
    residuals: np.ndarray
    basis: tuple
    basis_positions: tuple
    objective: float
    degenerate: bool
    eps_zero: float
    labels: np.ndarray

    @property
    def intercept(self) -> float:
        return float(self.beta[0])

    @property
    def coef(self) -> np.ndarray:
        return self.beta[1:]


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    prow = tab[row] / tab[row, col]
    tab -= np.outer(tab[:, col], prow)
    tab[row] = prow


def _simplex_basis(design: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, bool]:
    """Run the simplex on the L1 program.

    Returns the 0-based positions of the observations interpolated at the
    final vertex, and whether that vertex has an off-basis zero reduced cost.
    """
    n, q = design.shape
    ncol = q + 2 * n
    # rows 0..n-1 are constraints, row n is the reduced-cost row; last column is the rhs
    tab = np.zeros((n + 1, ncol + 1))
    tab[:n, :q] = design
    tab[:n, q:q + n] = np.eye(n)
    tab[:n, q + n:ncol] = -np.eye(n)
    tab[:n, -1] = y
    basis = np.empty(n, dtype=int)
    negative = y < 0
    tab[:n][negative] *= -1.0
    basis[:] = np.where(negative, q + n + np.arange(n), q + np.arange(n))

    cost = np.concatenate([np.zeros(q), np.ones(2 * n), [0.0]])
    tab[n] = cost - tab[:n].sum(axis=0)

    # bring every coefficient into the basis; a free basic variable never leaves
    for j in range(q):
        col = tab[:n, j]
        scale = np.max(np.abs(design[:, j]))
        movable = (basis >= q) & (np.abs(col) > 1e-9 * scale)
        if not movable.any():
            raise DataError("design matrix (with intercept) is rank deficient")
        rows = np.flatnonzero(movable)
        ratios = tab[rows, -1] / np.abs(col[rows])
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * (1.0 + best)]
        row = tied[np.argmin(basis[tied])]
        _pivot(tab, row, j)
        basis[row] = j

    max_iter = 50 * (n + q) ** 2
    for _ in range(max_iter):
        rhs = tab[:n, -1]
        np.maximum(rhs, 0.0, out=rhs, where=basis >= q)
        entering = np.flatnonzero(tab[n, q:ncol] < -_REDUCED_COST_TOL)
        if len(entering) == 0:
            break
        col_idx = q + entering[0]
        col = tab[:n, col_idx]
        rows = np.flatnonzero((basis >= q) & (col > 1e-12))
        if len(rows) == 0:
            raise NumericalError("L1 program reported unbounded; this cannot happen")
        ratios = rhs[rows] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * (1.0 + best)]
        row = tied[np.argmin(basis[tied])]
        _pivot(tab, row, col_idx)
        basis[row] = col_idx
    else:
        raise NumericalError(f"simplex did not terminate in {max_iter} pivots")

    in_basis = np.zeros(ncol, dtype=bool)
    in_basis[basis] = True
    obs_has_basic = in_basis[q:q + n] | in_basis[q + n:ncol]
    interpolated = np.flatnonzero(~obs_has_basic)
    reduced = tab[n, :ncol]
    off = np.concatenate([q + interpolated, q + n + interpolated])
    dual_degenerate = bool(np.any(reduced[off] <= _REDUCED_COST_TOL))
    return interpolated, dual_degenerate


def _fit_from_basis(data: Dataset, positions, extra_degenerate: bool) -> LadFit:
    design = design_matrix(data.x)
    positions = np.asarray(positions, dtype=int)
    try:
        beta = np.linalg.solve(design[positions], data.y[positions])
    except np.linalg.LinAlgError as exc:
        raise NumericalError("basis system is singular") from exc
    residuals = data.y - design @ beta
    residuals[positions] = 0.0
    eps = zero_tolerance(data.y)
    n_zero = int(np.sum(np.abs(residuals) <= eps))
    positions = tuple(int(i) for i in positions)
    return LadFit(
        beta=beta,
        residuals=residuals,
        basis=tuple(data.labels[list(positions)].tolist()),
        basis_positions=positions,
        objective=float(np.sum(np.abs(residuals))),
        degenerate=bool(extra_degenerate or n_zero > len(positions)),
        eps_zero=eps,
        labels=data.labels,
    )


def fit_lad(data, y=None) -> LadFit:
    """Fit the L1 regression hyperplane.

    Parameters
    ----------
    data : Dataset or array-like of shape (n, p)
        Observations, or predictors when ``y`` is given.
    y : array-like of shape (n,), optional

    Returns
    -------
    LadFit
        ``degenerate`` is set when more than ``p + 1`` residuals are zero or
        the optimum is not unique; the deterministic vertex is still returned.
    """
    data = as_dataset(data, y)
    require_size(data, 2, "LAD fit")
    positions, dual_degenerate = _simplex_basis(design_matrix(data.x), data.y)
    return _fit_from_basis(data, positions, dual_degenerate)


def brute_force_lad(data, y=None) -> LadFit:
    """Exhaustive L1 fit over all hyperplanes through ``p + 1`` observations.

    Only intended as a reference for small problems (``n <= 15``, ``p <= 3``).
    Ties in the objective go to the lexicographically smallest position set.
    """
    data = as_dataset(data, y)
    require_size(data, 2, "LAD fit")
    if data.n > BRUTE_FORCE_MAX_N or data.p > BRUTE_FORCE_MAX_P:
        raise DataError(
            f"brute force limited to n <= {BRUTE_FORCE_MAX_N} and p <= {BRUTE_FORCE_MAX_P}")
    design = design_matrix(data.x)
    q = design.shape[1]
    best, best_obj, n_best = None, np.inf, 0
    for combo in combinations(range(data.n), q):
        sub = design[list(combo)]
        if abs(np.linalg.det(sub)) < 1e-12 * max(1.0, np.abs(sub).max()) ** q:
            continue
        beta = np.linalg.solve(sub, data.y[list(combo)])
        obj = np.sum(np.abs(data.y - design @ beta))
        tol = 1e-12 * (1.0 + best_obj) if np.isfinite(best_obj) else 0.0
        if obj < best_obj - tol:
            best, best_obj, n_best = combo, obj, 1
        elif abs(obj - best_obj) <= tol:
            n_best += 1
    if best is None:
        raise DataError("every candidate hyperplane system is singular")
    # several optimal hyperplanes means the optimum is not unique
    fit = _fit_from_basis(data, best, extra_degenerate=False)
    if n_best > 1:
        fit = LadFit(**{**fit.__dict__, "degenerate": True})
    return fit


def max_abs_residual_position(fit: LadFit) -> int:
    """0-based position of the largest absolute residual off the basis.

    Values within ``fit.eps_zero`` of the maximum count as tied, and ties go
    to the smallest position.
    """
    resid = np.abs(np.asarray(fit.residuals, dtype=float))
    candidates = np.ones(len(resid), dtype=bool)
    candidates[list(fit.basis_positions)] = False
    if not candidates.any():
        raise DataError("no observation lies off the fitted hyperplane")
    top = resid[candidates].max()
    if top <= fit.eps_zero:
        raise DataError("all residuals are zero; the data are degenerate")
    winners = np.flatnonzero(candidates & (resid >= top - fit.eps_zero))
    return int(winners[0])


def max_abs_residual_index(fit: LadFit, data: Dataset | None = None):
    """Label of the observation farthest (vertically) from the fitted hyperplane."""
    labels = fit.labels if data is None else data.labels
    if len(labels) != len(fit.residuals):
        raise DataError("fit and data disagree on the number of observations")
    return labels[max_abs_residual_position(fit)].item()


class LADRegression(RegressorMixin, BaseEstimator):
    """Least absolute deviations linear regression.

    Attributes
    ----------
    coef_ : ndarray of shape (p,)
    intercept_ : float
    residuals_ : ndarray of shape (n,)
    support_ : ndarray of shape (p + 1,)
        Row positions of the observations the hyperplane passes through.
    objective_ : float
        Sum of absolute residuals at the optimum.
    degenerate_ : bool
    """

    def fit(self, X, y):
        fit = fit_lad(X, y)
        self.coef_ = fit.coef.copy()
        self.intercept_ = fit.intercept
        self.residuals_ = fit.residuals
        self.support_ = np.asarray(fit.basis_positions)
        self.objective_ = fit.objective
        self.degenerate_ = fit.degenerate
        self.n_features_in_ = len(self.coef_)
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_predictors(X, self.n_features_in_)
        return self.intercept_ + X @ self.coef_
