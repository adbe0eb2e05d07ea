"""Leave-one-out L and O scores.

For each of the n subsets obtained by deleting one observation, a LAD
hyperplane is fitted. Every observation the hyperplane passes through gains one
L point; the observation with the largest absolute residual gains one O point.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import Dataset, as_dataset, require_size
from .lad import fit_lad, max_abs_residual_position


@dataclass(frozen=True)
class ScoreTable:
    """Integer L and O scores aligned with ``labels``."""

    labels: np.ndarray
    l_scores: np.ndarray
    o_scores: np.ndarray
    n: int
    p: int
    degenerate_subsets: tuple = ()

    def l_of(self, label) -> int:
        return int(self.l_scores[self._pos(label)])

    def o_of(self, label) -> int:
        return int(self.o_scores[self._pos(label)])

    def _pos(self, label):
        hits = np.flatnonzero(self.labels == label)
        if len(hits) == 0:
            raise KeyError(label)
        return hits[0]

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "l_scores": {str(k): int(v) for k, v in zip(self.labels.tolist(), self.l_scores)},
            "o_scores": {str(k): int(v) for k, v in zip(self.labels.tolist(), self.o_scores)},
            "degenerate_subsets": list(self.degenerate_subsets),
        }


def _subset_contribution(data: Dataset, deleted: int):
    keep = np.delete(np.arange(data.n), deleted)
    fit = fit_lad(data.subset(keep))
    l_hits = keep[list(fit.basis_positions)]
    o_hit = keep[max_abs_residual_position(fit)]
    return l_hits, o_hit, fit.degenerate


def _resolve_threads(n_jobs):
    if n_jobs is None:
        return 1
    if n_jobs == -1 or n_jobs == "auto":
        import os
        return os.cpu_count() or 1
    if int(n_jobs) < 1:
        raise ValueError("n_jobs must be a positive integer, -1 or 'auto'")
    return int(n_jobs)


def compute_scores(data, y=None, n_jobs=1) -> ScoreTable:
    """L and O scores over all n leave-one-out subsets.

    Parameters
    ----------
    data : Dataset or array-like
    y : array-like, optional
        Response when ``data`` holds only the predictors.
    n_jobs : int or 'auto'
        Threads used for the subset fits. The result does not depend on it.
    """
    data = as_dataset(data, y)
    require_size(data, 3, "leave-one-out scoring")
    threads = _resolve_threads(n_jobs)
    if threads == 1:
        parts = [_subset_contribution(data, k) for k in range(data.n)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda k: _subset_contribution(data, k), range(data.n)))

    l_scores = np.zeros(data.n, dtype=np.int64)
    o_scores = np.zeros(data.n, dtype=np.int64)
    degenerate = []
    for k, (l_hits, o_hit, degen) in enumerate(parts):
        l_scores[l_hits] += 1
        o_scores[o_hit] += 1
        if degen:
            degenerate.append(data.labels[k].item())
    return ScoreTable(data.labels.copy(), l_scores, o_scores, data.n, data.p,
                      tuple(degenerate))


def rank_by(labels, scores):
    """Labels sorted by descending score, ties by ascending label."""
    order = sorted(range(len(labels)), key=lambda i: (-int(scores[i]), labels[i]))
    return [labels[i].item() if hasattr(labels[i], "item") else labels[i] for i in order]


def score_summary(table: ScoreTable) -> dict:
    """Observations ordered by descending L and, separately, by descending O.

    Each entry of the two lists is ``(label, L, O)``.
    """
    out = {}
    for key, scores in (("by_l", table.l_scores), ("by_o", table.o_scores)):
        ranked = rank_by(table.labels, scores)
        out[key] = [(lab, table.l_of(lab), table.o_of(lab)) for lab in ranked]
    return out


class LeaveOneOutScorer(BaseEstimator):
    """Estimator wrapper around :func:`compute_scores`.

    Attributes
    ----------
    l_scores_, o_scores_ : ndarray of shape (n,)
    degenerate_subsets_ : tuple
        Row positions whose deletion produced a degenerate fit.
    """

    def __init__(self, n_jobs=1):
        self.n_jobs = n_jobs

    def fit(self, X, y):
        table = compute_scores(X, y, n_jobs=self.n_jobs)
        self.l_scores_ = table.l_scores
        self.o_scores_ = table.o_scores
        self.degenerate_subsets_ = tuple(int(lab) - 1 for lab in table.degenerate_subsets)
        self.n_features_in_ = table.p
        return self
