"""Tabular data model, CSV I/O, equal-frequency binning and tie-breaking noise."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TARGET_COLUMN = "fitness"
DEFAULT_N_BINS = 3


class DataError(ValueError):
    """Raised for malformed input data (bad CSV, invalid dataset contents)."""


@dataclass(frozen=True)
class Dataset:
    """N samples of D continuous features plus a scalar target.

    Attributes
    ----------
    values : ndarray, shape (N, D)
        Feature matrix.
    names : tuple of str
        Feature labels, unique and non-empty.
    target : ndarray, shape (N,)
        Target (fitness) per sample.
    meta : dict
        Free-form provenance, e.g. run id or generator seed.
    """

    values: np.ndarray
    names: tuple[str, ...]
    target: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        target = np.array(self.target, dtype=float).ravel()
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DataError(f"values must be a non-empty N x D matrix, got shape {values.shape}")
        if target.shape[0] != values.shape[0]:
            raise DataError(f"target length {target.shape[0]} != number of samples {values.shape[0]}")
        if not np.all(np.isfinite(values)) or not np.all(np.isfinite(target)):
            raise DataError("dataset contains non-finite entries")
        names = tuple(str(n) for n in self.names)
        if len(names) != values.shape[1]:
            raise DataError(f"{len(names)} names for {values.shape[1]} feature columns")
        if any(not n for n in names):
            raise DataError("feature names must be non-empty")
        if len(set(names)) != len(names):
            raise DataError("feature names must be unique")
        values.setflags(write=False)
        target.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "names", names)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def column(self, index: int) -> np.ndarray:
        return self.values[:, index]

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown feature {name!r}") from None

    def subset(self, indices) -> "Dataset":
        """Dataset restricted to the given feature columns (in the given order)."""
        indices = list(indices)
        return Dataset(self.values[:, indices], tuple(self.names[i] for i in indices),
                       self.target, dict(self.meta))

    def with_columns(self, columns: np.ndarray, names) -> "Dataset":
        """Dataset with extra feature columns appended."""
        columns = np.asarray(columns, dtype=float)
        if columns.ndim == 1:
            columns = columns[:, None]
        return Dataset(np.hstack([self.values, columns]), self.names + tuple(names),
                       self.target, dict(self.meta))


@dataclass(frozen=True)
class BinnedDataset:
    """Discretized counterpart of :class:`Dataset` (codes in ``[0, n_bins)``)."""

    codes: np.ndarray
    n_bins: int
    names: tuple[str, ...]
    target_codes: np.ndarray

    @property
    def n_samples(self) -> int:
        return self.codes.shape[0]

    @property
    def n_features(self) -> int:
        return self.codes.shape[1]


def load_csv(path) -> Dataset:
    """Read a dataset from CSV; the column named ``fitness`` becomes the target.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    DataError
        On a missing/duplicate target column, ragged rows, or cells that are
        not finite reals. The message names the offending row and column.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r]
    if not rows:
        raise DataError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    hits = [i for i, h in enumerate(header) if h == TARGET_COLUMN]
    if not hits:
        raise DataError(f"{path}: no target column (expected header {TARGET_COLUMN!r})")
    if len(hits) > 1:
        raise DataError(f"{path}: duplicate target column {TARGET_COLUMN!r}")
    body = rows[1:]
    if not body:
        raise DataError(f"{path}: no data rows")
    table = np.empty((len(body), len(header)))
    for r, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DataError(f"{path}: row {r} has {len(row)} cells, header has {len(header)}")
        for c, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {r}, column {header[c]!r}: cannot parse {cell!r}") from None
            if not math.isfinite(v):
                raise DataError(f"{path}: row {r}, column {header[c]!r}: non-finite value {cell!r}")
            table[r - 2, c] = v
    t = hits[0]
    feature_idx = [i for i in range(len(header)) if i != t]
    if not feature_idx:
        raise DataError(f"{path}: no feature columns")
    return Dataset(table[:, feature_idx], tuple(header[i] for i in feature_idx), table[:, t],
                   {"source": str(path)})


def emit_csv(data: Dataset, path) -> None:
    """Write ``data`` as CSV with features first and ``fitness`` last (17 significant digits)."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(data.names) + [TARGET_COLUMN])
        for row, y in zip(data.values, data.target):
            w.writerow([f"{v:.17g}" for v in row] + [f"{y:.17g}"])


def bin_equal_frequency(column, n_bins: int) -> np.ndarray:
    """Equal-frequency codes: the sample of rank r gets ``floor(r * n_bins / N)``.

    Ties are broken by original sample index.
    """
    column = np.asarray(column, dtype=float).ravel()
    n = column.shape[0]
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    if n < n_bins:
        raise ValueError(f"need at least n_bins={n_bins} samples, got {n}")
    order = np.argsort(column, kind="stable")
    codes = np.empty(n, dtype=np.int64)
    codes[order] = (np.arange(n) * n_bins) // n
    return codes


def add_tie_breaking_noise(column, amplitude: float, seed: int) -> np.ndarray:
    """Add uniform noise in ``[-amplitude*s, amplitude*s]``, s the column's SD (1 if SD is 0)."""
    if amplitude < 0:
        raise ValueError(f"noise amplitude must be >= 0, got {amplitude}")
    column = np.asarray(column, dtype=float)
    if amplitude == 0:
        return column.copy()
    s = float(np.std(column))
    if s == 0:
        s = 1.0
    rng = np.random.default_rng(seed)
    return column + rng.uniform(-amplitude * s, amplitude * s, size=column.shape)


def bin_dataset(data: Dataset, n_bins: int = DEFAULT_N_BINS) -> BinnedDataset:
    codes = np.column_stack([bin_equal_frequency(data.values[:, j], n_bins)
                             for j in range(data.n_features)])
    return BinnedDataset(codes, n_bins, data.names, bin_equal_frequency(data.target, n_bins))


def pack_codes(*columns) -> np.ndarray:
    """Mixed-radix packing of several code columns into one joint code column.

    Each column may be 1-D or 2-D (several variables). Returns codes in
    ``[0, number of distinct joint symbols)`` (dense, order-preserving).
    """
    parts = []
    for c in columns:
        c = np.asarray(c)
        parts.extend([c] if c.ndim == 1 else [c[:, j] for j in range(c.shape[1])])
    if not parts:
        raise ValueError("nothing to pack")
    n = parts[0].shape[0]
    joint = np.zeros(n, dtype=np.int64)
    for p in parts:
        p = np.asarray(p, dtype=np.int64)
        if p.shape[0] != n:
            raise ValueError("length mismatch")
        if p.size and p.min() < 0:
            raise ValueError("codes must be non-negative")
        radix = int(p.max()) + 1 if p.size else 1
        joint = joint * radix + p
        # re-densify so the radix product cannot overflow for many variables
        _, joint = np.unique(joint, return_inverse=True)
        joint = joint.astype(np.int64)
    return joint
