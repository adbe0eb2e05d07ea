from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from conftest import random_dataset
from ladiag import (DataError, Dataset, LADRegression, LadFit, brute_force_lad, fit_lad,
                    max_abs_residual_index)
from ladiag.lad import zero_tolerance


def _fit_with_residuals(residuals, basis_positions):
    residuals = np.asarray(residuals, dtype=float)
    labels = np.arange(1, len(residuals) + 1)
    return LadFit(beta=np.zeros(2), residuals=residuals,
                  basis=tuple(labels[list(basis_positions)]),
                  basis_positions=tuple(basis_positions),
                  objective=float(np.abs(residuals).sum()), degenerate=False,
                  eps_zero=1e-8, labels=labels)


def _hand_enumeration(points):
    """Sum of absolute deviations for every line through two points, in exact arithmetic."""
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    out = {}
    for a, b in combinations(range(len(pts)), 2):
        (x1, y1), (x2, y2) = pts[a], pts[b]
        slope = (y2 - y1) / (x2 - x1)
        icpt = y1 - slope * x1
        out[(a + 1, b + 1)] = sum(abs(y - icpt - slope * x) for x, y in pts)
    return out


def test_three_points_line_through_two():
    data = Dataset([0, 1, 2], [0, 1, 2.5])
    sums = _hand_enumeration([(0, 0), (1, 1), ("2", "2.5")])
    best = min(sums, key=sums.get)
    fit = fit_lad(data)
    assert fit.basis == best == (1, 3)
    assert fit.objective == pytest.approx(float(sums[best]), rel=1e-12)
    assert not fit.degenerate
    assert fit.objective == pytest.approx(brute_force_lad(data).objective, rel=1e-12)


def test_collinear_points_are_degenerate():
    fit = fit_lad(Dataset([0, 1, 2], [0, 1, 2]))
    assert fit.degenerate
    assert fit.objective == 0.0
    assert np.all(np.abs(fit.residuals) <= fit.eps_zero)


def test_brute_force_four_points_hand_enumeration():
    points = [(0, 0), (1, 1), (2, "2.5"), (3, "2.9")]
    sums = _hand_enumeration(points)
    assert len(sums) == 6
    assert min(sums.values()) == Fraction(3, 5)
    data = Dataset([0, 1, 2, 3], [0, 1, 2.5, 2.9])
    fit = brute_force_lad(data)
    assert fit.objective == pytest.approx(0.6, rel=1e-12)
    # three lines tie at 3/5; the smallest basis wins and the tie is reported
    assert fit.basis == (1, 2)
    assert fit.degenerate
    assert fit_lad(data).objective == pytest.approx(0.6, rel=1e-12)


def test_brute_force_objective_is_sum_of_off_basis_residuals():
    data = Dataset([0, 1, 2, 3, 4], [0, 1, 3, 2.5, 7])
    fit = brute_force_lad(data)
    off = np.delete(fit.residuals, fit.basis_positions)
    assert fit.objective == pytest.approx(np.abs(off).sum(), rel=1e-12)


def test_brute_force_guards():
    with pytest.raises(DataError):
        brute_force_lad(Dataset([0, 1], [0, 1]))
    rng = np.random.default_rng(0)
    with pytest.raises(DataError):
        brute_force_lad(random_dataset(rng, 16, 1))
    with pytest.raises(DataError):
        brute_force_lad(random_dataset(rng, 10, 4))


@pytest.mark.parametrize("seed", range(40))
def test_simplex_matches_brute_force(seed):
    rng = np.random.default_rng(1000 + seed)
    p = int(rng.integers(1, 4))
    n = int(rng.integers(p + 2, 14))
    data = random_dataset(rng, n, p)
    fast, slow = fit_lad(data), brute_force_lad(data)
    assert fast.objective == pytest.approx(slow.objective, rel=1e-9, abs=1e-12)
    if not fast.degenerate:
        np.testing.assert_allclose(fast.beta, slow.beta, rtol=1e-8, atol=1e-10)
        assert fast.basis == slow.basis


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(5, 40), p=st.integers(1, 3))
def test_fit_invariants(seed, n, p):
    rng = np.random.default_rng(seed)
    data = random_dataset(rng, n, p)
    fit = fit_lad(data)
    design = np.column_stack([np.ones(n), data.x])
    np.testing.assert_allclose(fit.residuals, data.y - design @ fit.beta, atol=1e-9)
    assert fit.objective == pytest.approx(np.abs(fit.residuals).sum(), rel=1e-10)
    assert len(fit.basis) == p + 1
    assert np.all(np.abs(fit.residuals[list(fit.basis_positions)]) <= fit.eps_zero)
    if not fit.degenerate:
        assert np.sum(np.abs(fit.residuals) <= fit.eps_zero) == p + 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), shift=st.floats(-1e3, 1e3))
def test_translation_equivariance(seed, shift):
    rng = np.random.default_rng(seed)
    data = random_dataset(rng, 15, 2)
    moved = Dataset(data.x, data.y + shift)
    a, b = fit_lad(data), fit_lad(moved)
    assert b.basis == a.basis
    assert b.beta[0] == pytest.approx(a.beta[0] + shift, rel=1e-9, abs=1e-9 * (1 + abs(shift)))
    np.testing.assert_allclose(b.beta[1:], a.beta[1:], rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(b.residuals, a.residuals, atol=1e-9 * (1 + abs(shift)))
    assert b.objective == pytest.approx(a.objective, rel=1e-9)


def test_interior_point_with_huge_response_leaves_basis():
    rng = np.random.default_rng(7)
    x, y = rng.uniform(0, 10, 12), rng.normal(size=12)
    for sign in (1, -1):
        x_new = 0.5 * (x.min() + x.max())
        data = Dataset(np.r_[x, x_new], np.r_[y, sign * 1e6 * np.abs(y).max()])
        assert 13 not in fit_lad(data).basis


def test_far_predictor_enters_basis():
    rng = np.random.default_rng(8)
    x, y = rng.uniform(0, 10, 12), rng.normal(size=12)
    data = Dataset(np.r_[x, 1e6 * np.abs(x).max()], np.r_[y, y.mean()])
    assert 13 in fit_lad(data).basis


def test_max_abs_residual_unique():
    fit = _fit_with_residuals([0, 0, 3, -1], [0, 1])
    assert max_abs_residual_index(fit) == 3


def test_max_abs_residual_tie_goes_to_smallest():
    fit = _fit_with_residuals([0, 0, 2, -2], [0, 1])
    assert max_abs_residual_index(fit) == 3


def test_max_abs_residual_all_zero():
    with pytest.raises(DataError):
        max_abs_residual_index(_fit_with_residuals([0, 0, 0], [0, 1]))


def test_telephone_max_residual_in_contaminated_block(telephone):
    assert max_abs_residual_index(fit_lad(telephone), telephone) in range(15, 21)


def test_telephone_full_fit_is_not_unique(telephone):
    # several lines through two points reach the same minimum on this data
    fit = fit_lad(telephone)
    assert fit.degenerate
    design = np.column_stack([np.ones(24), telephone.x])
    objs = []
    for a, b in combinations(range(24), 2):
        beta = np.linalg.solve(design[[a, b]], telephone.y[[a, b]])
        objs.append(np.abs(telephone.y - design @ beta).sum())
    objs = np.sort(objs)
    assert fit.objective == pytest.approx(objs[0], rel=1e-9)
    assert objs[1] == pytest.approx(objs[0], rel=1e-9)


def test_input_errors():
    with pytest.raises(DataError):
        fit_lad(Dataset([0, 1], [0, 1]))
    with pytest.raises(DataError):
        Dataset(np.zeros((4, 1)), np.zeros(3))
    with pytest.raises(DataError):
        Dataset([0, 1, np.nan, 3], [0, 1, 2, 3])
    with pytest.raises(DataError):
        Dataset([0, 1, 2], [0, 1, 2], labels=[1, 1, 2])
    with pytest.raises(DataError):
        fit_lad(np.c_[np.arange(6.0), np.arange(6.0)], np.arange(6.0) ** 2)


def test_zero_tolerance_scales_with_response():
    assert zero_tolerance([1.0, -3.0]) == pytest.approx(4e-8)


def test_deterministic_bytes():
    rng = np.random.default_rng(3)
    data = random_dataset(rng, 30, 2)
    a, b = fit_lad(data), fit_lad(Dataset(data.x.copy(), data.y.copy()))
    assert a.beta.tobytes() == b.beta.tobytes()
    assert a.basis == b.basis


def test_estimator_api():
    rng = np.random.default_rng(4)
    X = rng.uniform(0, 10, (30, 2))
    y = X @ [1.0, -2.0] + 3 + rng.laplace(size=30)
    model = LADRegression().fit(X, y)
    fit = fit_lad(X, y)
    assert model.intercept_ == pytest.approx(fit.intercept)
    np.testing.assert_allclose(model.predict(X), y - fit.residuals, atol=1e-9)
    assert len(model.support_) == 3
    assert clone(model).get_params() == {}
    pipe = make_pipeline(StandardScaler(), LADRegression()).fit(X, y)
    # rescaling predictors does not change the L1 fit's fitted values
    np.testing.assert_allclose(pipe.predict(X), model.predict(X), atol=1e-7)
    with pytest.raises(ValueError):
        model.predict(X[:, :1])
