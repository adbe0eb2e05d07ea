"""Iterative leverage-point and outlier detection from leave-one-out scores.

Both detectors keep a working set ``S`` of observations. Each round scores
every point of ``S`` on its own leave-one-out fits and takes the best scorer.
The point is either flagged, and any quarantined points return to ``S``, or
quarantined. A run stops when ``S`` has shrunk to a fixed fraction of the
original size.

Leverage detection flags the top L scorer when its score is at least
``8/9 (m - 1)`` and ``3/4 (n - 1)``, with a floor of ``9n/10``.

Outlier detection flags the top O scorer only when its score is ``m - 1``
(every fit put it farthest away). The flagged scores must also form the run
``O1, O1 - 1, O1 - 2, ...``. If a maximal score breaks that run, the process
stops. The floor is ``4n/5``.

By default a round only runs when removing one more point keeps ``|S|`` at or
above the floor. This caps the flagged set at ``floor(n/10)`` leverage points
and ``floor(n/5)`` outliers. ``size_rule="literal"`` instead checks
``|S| <= floor`` after each move, which can end one point past the floor.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, OutlierMixin

from ._validation import Dataset, as_dataset, require_size
from .scores import compute_scores

LEVERAGE_ROUND_FRACTION = Fraction(8, 9)
LEVERAGE_GLOBAL_FRACTION = Fraction(3, 4)
LEVERAGE_FLOOR = Fraction(9, 10)
OUTLIER_FLOOR = Fraction(4, 5)

SIZE_RULES = ("cap", "literal")

SIZE_FLOOR = "size-floor-reached"
SEQUENCE_BROKEN = "score-sequence-broken"


@dataclass(frozen=True)
class RoundTrace:
    m: int
    k1: int
    score: int
    decision: str
    restored: tuple = ()

    def to_record(self) -> str:
        return (f"m={self.m} k1={self.k1} score={self.score} "
                f"decision={self.decision} restored={len(self.restored)}")


@dataclass
class DetectionReport:
    """Flagged labels in detection order, plus the per-round audit trail."""

    kind: str
    flagged: list
    rounds: list = field(default_factory=list)
    stop_reason: str = SIZE_FLOOR
    degenerate_rounds: int = 0

    def audit_log(self) -> str:
        lines = [f"# {self.kind} detection"]
        lines += [r.to_record() for r in self.rounds]
        lines.append(f"stop_reason={self.stop_reason}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["rounds"] = [{**asdict(r), "restored": list(r.restored)} for r in self.rounds]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _floor_reached(size: int, fraction: Fraction, n: int, rule: str) -> bool:
    if rule == "cap":
        return size - 1 < fraction * n
    return size <= fraction * n


def _top(labels, scores):
    # argmax with ties to the smallest label
    best = int(np.max(scores))
    winners = [lab for lab, s in zip(labels, scores) if s == best]
    return min(winners), best


def _run(data: Dataset, kind: str, n_jobs, size_rule="cap") -> DetectionReport:
    if size_rule not in SIZE_RULES:
        raise ValueError(f"size_rule must be one of {SIZE_RULES}, got {size_rule!r}")
    require_size(data, 3, f"{kind} detection")
    n, p = data.n, data.p
    working = list(data.labels.tolist())
    quarantine: list = []
    report = DetectionReport(kind=kind, flagged=[])
    last_max = 0
    floor = LEVERAGE_FLOOR if kind == "leverage" else OUTLIER_FLOOR

    while True:
        m = len(working)
        if m < p + 3 or (not report.rounds and _floor_reached(m, floor, n, size_rule)):
            report.stop_reason = SIZE_FLOOR
            break
        positions = [data.position_of(lab) for lab in working]
        table = compute_scores(data.subset(positions), n_jobs=n_jobs)
        if table.degenerate_subsets:
            report.degenerate_rounds += 1
        scores = table.l_scores if kind == "leverage" else table.o_scores
        k1, score = _top(table.labels.tolist(), scores)

        if kind == "leverage":
            # 9 L >= 8 (m-1)  and  4 L >= 3 (n-1), in exact arithmetic
            flag = (score >= LEVERAGE_ROUND_FRACTION * (m - 1)
                    and score >= LEVERAGE_GLOBAL_FRACTION * (n - 1))
            stop = False
        else:
            flag = stop = False
            if score == m - 1:
                if last_max == 0 or score == last_max - 1:
                    flag = True
                    last_max = score
                else:
                    stop = True

        if stop:
            report.rounds.append(RoundTrace(m, k1, score, "stop"))
            report.stop_reason = SEQUENCE_BROKEN
            break
        working.remove(k1)
        if flag:
            restored = tuple(quarantine)
            report.flagged.append(k1)
            working.extend(quarantine)
            quarantine = []
            report.rounds.append(RoundTrace(m, k1, score, "flag", restored))
        else:
            quarantine.append(k1)
            report.rounds.append(RoundTrace(m, k1, score, "quarantine"))
        # keep the working set in label order so each round is order independent
        working.sort(key=data.position_of)

        if _floor_reached(len(working), floor, n, size_rule):
            report.stop_reason = SIZE_FLOOR
            break
    return report


def detect_leverage(data, y=None, n_jobs=1, size_rule="cap") -> DetectionReport:
    """Flag leverage points by iterated leave-one-out L scores.

    Parameters
    ----------
    data : Dataset or array-like
    y : array-like, optional
    n_jobs : int or 'auto'
        Threads for the subset fits within a round.
    size_rule : {'cap', 'literal'}
        How the working-set floor ends the run (see the module docstring).

    Returns
    -------
    DetectionReport
    """
    return _run(as_dataset(data, y), "leverage", n_jobs, size_rule)


def detect_outliers(data, y=None, n_jobs=1, size_rule="cap") -> DetectionReport:
    """Flag outliers by iterated leave-one-out O scores.

    See :func:`detect_leverage` for the parameters.
    """
    return _run(as_dataset(data, y), "outlier", n_jobs, size_rule)


class _ScoreDetector(OutlierMixin, BaseEstimator):
    _kind = None

    def __init__(self, n_jobs=1, size_rule="cap"):
        self.n_jobs = n_jobs
        self.size_rule = size_rule

    def fit(self, X, y):
        data = as_dataset(X, y)
        report = _run(data, self._kind, self.n_jobs, self.size_rule)
        self.report_ = report
        self.flagged_ = np.array([data.position_of(lab) for lab in report.flagged], dtype=int)
        self.stop_reason_ = report.stop_reason
        self.n_features_in_ = data.p
        labels = np.ones(data.n, dtype=int)
        labels[self.flagged_] = -1
        self.labels_ = labels
        return self

    def fit_predict(self, X, y=None):
        """Fit and return -1 for flagged rows, 1 otherwise."""
        return self.fit(X, y).labels_


class LeverageDetector(_ScoreDetector):
    """Estimator form of :func:`detect_leverage`.

    ``flagged_`` holds 0-based row positions in detection order and
    ``labels_`` marks them with -1, following scikit-learn's outlier
    detector convention.
    """

    _kind = "leverage"


class OutlierDetector(_ScoreDetector):
    """Estimator form of :func:`detect_outliers`."""

    _kind = "outlier"
