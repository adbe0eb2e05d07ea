"""Input validation helpers and the :class:`Dataset` container."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.utils.validation import check_array, check_X_y


class DataError(ValueError):
    """Raised when input data violates a shape, finiteness or size requirement."""


class NumericalError(RuntimeError):
    """Raised when a numerical routine fails in a way that should not happen."""


@dataclass(frozen=True)
class Dataset:
    """n observations of p predictors plus one response.

    Parameters
    ----------
    x : array-like of shape (n, p)
        Predictor values.
    y : array-like of shape (n,)
        Responses.
    labels : sequence of int, optional
        Stable observation identifiers. Defaults to ``1..n``.

    At least ``p + 2`` observations are required so that some point can lie
    off a fitted hyperplane.
    """

    x: np.ndarray
    y: np.ndarray
    labels: np.ndarray = field(default=None)

    def __post_init__(self):
        x, y = check_xy(self.x, self.y)
        if x.shape[0] < x.shape[1] + 2:
            raise DataError(f"need n >= p + 2 observations, got n={x.shape[0]}, p={x.shape[1]}")
        if self.labels is None:
            labels = np.arange(1, x.shape[0] + 1)
        else:
            labels = np.asarray(self.labels)
            if labels.shape != (x.shape[0],):
                raise DataError(
                    f"expected {x.shape[0]} labels, got shape {labels.shape}")
            if len(np.unique(labels)) != len(labels):
                raise DataError("observation labels must be unique")
        x.setflags(write=False)
        y.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def subset(self, positions) -> "Dataset":
        """Rows at ``positions`` (0-based), keeping their labels."""
        positions = np.asarray(positions, dtype=int)
        return Dataset(self.x[positions], self.y[positions], self.labels[positions])

    def without(self, position: int) -> "Dataset":
        keep = np.delete(np.arange(self.n), position)
        return self.subset(keep)

    def position_of(self, label) -> int:
        hits = np.flatnonzero(self.labels == label)
        if len(hits) == 0:
            raise KeyError(f"no observation labelled {label!r}")
        return int(hits[0])

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)
                and np.array_equal(self.labels, other.labels))

    __hash__ = None


def check_xy(x, y):
    """Validate predictors and response, returning float64 copies.

    A 1-d ``x`` is read as a single predictor column.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    try:
        x, y = check_X_y(x, y, dtype=np.float64, ensure_all_finite=True,
                         y_numeric=True, ensure_min_samples=1, copy=True)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    return x, y


def check_predictors(x, n_features: int):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    x = check_array(x, dtype=np.float64, ensure_all_finite=True)
    if x.shape[1] != n_features:
        raise DataError(f"expected {n_features} predictors, got {x.shape[1]}")
    return x


def as_dataset(x, y=None) -> Dataset:
    """Accept either a :class:`Dataset` or an ``(x, y)`` pair."""
    if isinstance(x, Dataset):
        if y is not None:
            raise TypeError("y must be omitted when passing a Dataset")
        return x
    if y is None:
        raise TypeError("y is required when x is not a Dataset")
    return Dataset(x, y)


def require_size(data: Dataset, extra: int, what: str) -> None:
    """Require ``n >= p + extra``."""
    if data.n < data.p + extra:
        raise DataError(
            f"{what} needs at least p+{extra} = {data.p + extra} observations, "
            f"got n={data.n}")


def design_matrix(x: np.ndarray) -> np.ndarray:
    """Prepend the intercept column."""
    return np.column_stack([np.ones(x.shape[0]), x])
