"""Dataset ingestion, the bundled classic datasets and simulated contamination designs."""

from __future__ import annotations

import csv
import hashlib
from importlib import resources
from pathlib import Path

import numpy as np

from .._validation import DataError, Dataset

BUNDLED = {
    # name: (file, response column, ignored columns, sha256)
    "telephone": ("telephone.csv", "calls", (),
                  "39e07ac9f90300e86c0e1f111409062622a414c3d6db7a5699bbcb05f6388073"),
    "hawkins": ("hawkins.csv", "y", (),
                "aa5b74f303b53fbb21f9d9fa45523ee4069ac7d72a16f12f19c2949815f41aea"),
    "scottish": ("scottish.csv", "time", ("race",),
                 "f44f86873d53bed9e30429d33e5ff8c4c2c115595efc12a9edb0559f407eb84e"),
}
GENERATED = ("twovariables", "threevariables")


def load_csv(path, response_column=-1, delimiter=",", ignore_columns=(),
             min_rows=None) -> Dataset:
    """Read a numeric table with a header row.

    Parameters
    ----------
    path : str or Path
    response_column : str or int
        Header name or 0-based column index of the response. Defaults to the
        last column.
    delimiter : str
    ignore_columns : iterable of str
        Columns to drop before parsing (e.g. free-text names).
    min_rows : int, optional
        Minimum row count; defaults to ``p + 3`` so the leave-one-out scores
        are defined.

    Returns
    -------
    Dataset
        Predictors keep file column order; labels are 1-based row numbers.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    seen = set()
    for h in header:
        if h in seen:
            raise DataError(f"{path}: duplicate column name {h!r}")
        seen.add(h)

    ignored = set(ignore_columns)
    keep = [j for j, h in enumerate(header) if h not in ignored]
    names = [header[j] for j in keep]
    if isinstance(response_column, str) and response_column not in names:
        if response_column.lstrip("-").isdigit():
            response_column = int(response_column)
        else:
            raise DataError(f"{path}: response column {response_column!r} not found; "
                            f"columns are {names}")
    if isinstance(response_column, int):
        try:
            response = names[response_column]
        except IndexError:
            raise DataError(f"{path}: response column index {response_column} "
                            f"out of range for {len(names)} columns") from None
    else:
        response = response_column

    values = np.empty((len(rows) - 1, len(keep)))
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != len(header):
            raise DataError(f"{path}: row {i} has {len(row)} fields, expected {len(header)}")
        for k, j in enumerate(keep):
            cell = row[j].strip()
            try:
                values[i - 1, k] = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {i}, column {header[j]!r}: "
                                f"non-numeric value {cell!r}") from None
            if not np.isfinite(values[i - 1, k]):
                raise DataError(f"{path}: row {i}, column {header[j]!r}: non-finite value")

    r = names.index(response)
    y = values[:, r]
    x = np.delete(values, r, axis=1)
    if x.shape[1] == 0:
        raise DataError(f"{path}: no predictor columns")
    needed = x.shape[1] + 3 if min_rows is None else min_rows
    if len(y) < needed:
        raise DataError(f"{path}: {len(y)} rows, need at least {needed}")
    return Dataset(x, y)


def _bundled_path(filename):
    return resources.files(__name__).joinpath("data", filename)


def bundled_path(name) -> Path:
    """Filesystem path of a bundled CSV."""
    if name not in BUNDLED:
        raise DataError(f"unknown bundled dataset {name!r}; choose from {sorted(BUNDLED)}")
    return Path(str(_bundled_path(BUNDLED[name][0])))


def bundled(name) -> Dataset:
    """One of the classic datasets: ``telephone``, ``hawkins`` or ``scottish``.

    Rows keep the numbering of the published sources (see ``data/PROVENANCE.md``).
    """
    path = bundled_path(name)
    filename, response, ignored, digest = BUNDLED[name]
    actual = hashlib.sha256(path.read_bytes()).hexdigest()
    if actual != digest:
        raise DataError(f"bundled file {filename} failed its checksum")
    return load_csv(path, response_column=response, ignore_columns=ignored)


def _contaminated(rng, n_pred):
    clean = rng.uniform(0.0, 10.0, size=(50, n_pred))
    lever = np.repeat(np.array([[25.0], [28.0], [31.0]]), n_pred, axis=1)
    outl = rng.uniform(0.0, 10.0, size=(3, n_pred))
    x = np.vstack([clean, lever, outl])
    noise = rng.normal(size=56)
    shift = np.r_[np.zeros(53), np.full(3, 15.0)]
    y = x.sum(axis=1) + 4.0 + shift + noise
    return Dataset(x, y)


def generate_twovariables(seed) -> Dataset:
    """56 rows from ``y = x + 4 + N(0, 1)`` with x ~ U(0, 10).

    Rows 51-53 sit on the model at x = 25, 28, 31 (leverage points); rows
    54-56 are shifted up by 15 (outliers).
    """
    return _contaminated(np.random.default_rng(seed), 1)


def generate_threevariables(seed) -> Dataset:
    """Two-predictor version of :func:`generate_twovariables`, ``y = x1 + x2 + 4 + e``.

    The leverage rows use the same offset in both predictors.
    """
    return _contaminated(np.random.default_rng(seed), 2)


def generate(name, seed) -> Dataset:
    if name == "twovariables":
        return generate_twovariables(seed)
    if name == "threevariables":
        return generate_threevariables(seed)
    raise DataError(f"unknown generator {name!r}; choose from {list(GENERATED)}")


def write_csv(data: Dataset, stream, delimiter=","):
    """Write ``x1..xp, y`` with a header row."""
    writer = csv.writer(stream, delimiter=delimiter, lineterminator="\n")
    writer.writerow([f"x{j + 1}" for j in range(data.p)] + ["y"])
    for xi, yi in zip(data.x, data.y):
        writer.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])
