"""Predictive validation of feature sets by nearest-neighbour regression.

A feature set is scored by how well a k-NN regressor (k = 1 by default) on
those features predicts the target on held-out samples. Repeated random
holdout splits give a mean MAE per (method, set size) together with the
per-split values for paired comparisons.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import CRITERIA, rank
from .data import DEFAULT_N_BINS, Dataset, bin_dataset
from .selection import SelectionResult

CMI_METHOD = "CMI"


def _standardize(train: np.ndarray, query: np.ndarray):
    mu = train.mean(axis=0)
    sd = train.std(axis=0)
    sd[sd == 0] = 1.0
    return (train - mu) / sd, (query - mu) / sd


def knn_predict(train_x, train_y, query_x, k: int = 1, chunk: int = 256) -> np.ndarray:
    """Mean target of the ``k`` nearest training rows (Euclidean, train-standardized).

    Ties in distance go to the lowest training index.
    """
    train_x = np.asarray(train_x, dtype=float)
    query_x = np.asarray(query_x, dtype=float)
    train_y = np.asarray(train_y, dtype=float)
    if train_x.ndim == 1:
        train_x = train_x[:, None]
    if query_x.ndim == 1:
        query_x = query_x[:, None]
    if train_x.shape[0] == 0:
        raise ValueError("empty training set")
    if train_y.shape != (train_x.shape[0],):
        raise ValueError("train_y length does not match train_x")
    if query_x.shape[1] != train_x.shape[1]:
        raise ValueError(f"dimension mismatch: train has {train_x.shape[1]} columns, query {query_x.shape[1]}")
    if k < 1 or k > train_x.shape[0]:
        raise ValueError(f"k must lie in [1, {train_x.shape[0]}], got {k}")
    tr, qu = _standardize(train_x, query_x)
    out = np.empty(qu.shape[0])
    for s in range(0, qu.shape[0], chunk):
        q = qu[s:s + chunk]
        d2 = ((q[:, None, :] - tr[None, :, :]) ** 2).sum(axis=2)
        nn = np.argsort(d2, axis=1, kind="stable")[:, :k]
        out[s:s + chunk] = train_y[nn].mean(axis=1)
    return out


def mae(pred, truth) -> float:
    pred = np.asarray(pred, dtype=float).ravel()
    truth = np.asarray(truth, dtype=float).ravel()
    if pred.shape != truth.shape:
        raise ValueError("length mismatch")
    if pred.size == 0:
        raise ValueError("empty input")
    return float(np.mean(np.abs(pred - truth)))


@dataclass(frozen=True)
class HoldoutProtocol:
    holdout: float = 0.2
    n_repeats: int = 10
    seed: int = 0
    k: int = 1

    def __post_init__(self):
        if not 0 < self.holdout < 1:
            raise ValueError("holdout fraction must lie in (0, 1)")
        if self.n_repeats < 1:
            raise ValueError("n_repeats must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def splits(self, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
        """Seeded (train, test) index pairs; split ``r`` uses RNG key ``[seed, r]``."""
        n_test = int(round(n * self.holdout))
        if n_test < 1 or n - n_test < self.k:
            raise ValueError(f"holdout {self.holdout} leaves an empty split for n={n}")
        out = []
        for r in range(self.n_repeats):
            perm = np.random.default_rng([self.seed, r]).permutation(n)
            out.append((np.sort(perm[n_test:]), np.sort(perm[:n_test])))
        return out


def holdout_maes(data: Dataset, features, protocol: HoldoutProtocol) -> np.ndarray:
    """MAE of k-NN on ``features`` for each split of ``protocol``."""
    features = list(features)
    if not features:
        raise ValueError("empty feature set")
    x = data.values[:, features]
    y = data.target
    return np.array([mae(knn_predict(x[tr], y[tr], x[te], protocol.k), y[te])
                     for tr, te in protocol.splits(data.n_samples)])


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    size: int
    features: tuple[int, ...]
    mae: float
    split_maes: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple[ComparisonRow, ...]
    protocol: HoldoutProtocol
    names: tuple[str, ...]

    def __post_init__(self):
        keys = [(r.method, r.size) for r in self.rows]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (method, size) rows")

    def get(self, method: str, size: int) -> ComparisonRow:
        for r in self.rows:
            if r.method == method and r.size == size:
                return r
        raise KeyError((method, size))

    def series(self) -> dict[str, list[tuple[int, float]]]:
        """Per-method ``(size, mae)`` points in size order."""
        out: dict[str, list[tuple[int, float]]] = {}
        for r in self.rows:
            out.setdefault(r.method, []).append((r.size, r.mae))
        return {m: sorted(v) for m, v in out.items()}

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["method", "size", "mae", "features", "split_maes"])
            for r in self.rows:
                w.writerow([r.method, r.size, f"{r.mae:.17g}", ";".join(self.names[i] for i in r.features),
                            ";".join(f"{m:.17g}" for m in r.split_maes)])

    def write_series(self, path) -> None:
        """Wide plot-data file: one row per size, one MAE column per method (blank if absent)."""
        series = self.series()
        methods = list(series)
        sizes = sorted({s for v in series.values() for s, _ in v})
        lookup = {m: dict(v) for m, v in series.items()}
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["size", *methods])
            for s in sizes:
                w.writerow([s, *(f"{lookup[m][s]:.17g}" if s in lookup[m] else "" for m in methods)])


def compare_selectors(data: Dataset, methods, max_size: int, protocol: HoldoutProtocol = HoldoutProtocol(),
                      selection: SelectionResult | None = None, n_bins: int = DEFAULT_N_BINS) -> ComparisonTable:
    """k-NN holdout MAE of each method's feature sets.

    Parameters
    ----------
    data : Dataset
    methods : sequence of str
        Baseline criteria (see :data:`infosens.baselines.CRITERIA`) and/or
        ``"CMI"``. Baselines contribute one row per size ``1..max_size``
        from a single ranking on the full data; ``"CMI"`` contributes the
        single set in ``selection`` (skipped when that set is empty).
    max_size : int
    protocol : HoldoutProtocol
    selection : SelectionResult, optional
        Required when ``"CMI"`` is among the methods.
    n_bins : int
        Bins per variable for the baseline criteria.
    """
    methods = [m.upper() for m in methods]
    if not methods:
        raise ValueError("no methods given")
    if len(set(methods)) != len(methods):
        raise ValueError("duplicate methods")
    if not 1 <= max_size <= data.n_features:
        raise ValueError(f"max_size must lie in [1, {data.n_features}]")
    unknown = [m for m in methods if m != CMI_METHOD and m not in CRITERIA]
    if unknown:
        raise ValueError(f"unknown methods {unknown}")
    if CMI_METHOD in methods and selection is None:
        raise ValueError("method CMI needs a selection result")
    protocol.splits(data.n_samples)  # validate early

    binned = bin_dataset(data, n_bins) if any(m != CMI_METHOD for m in methods) else None
    rows = []
    for m in methods:
        if m == CMI_METHOD:
            feats = tuple(selection.feature_set)
            if feats:
                maes = holdout_maes(data, feats, protocol)
                rows.append(ComparisonRow(m, len(feats), feats, float(maes.mean()), maes))
            continue
        ordered = rank(m, binned, max_size).ordered
        for size in range(1, max_size + 1):
            feats = ordered[:size]
            maes = holdout_maes(data, feats, protocol)
            rows.append(ComparisonRow(m, size, feats, float(maes.mean()), maes))
    return ComparisonTable(tuple(rows), protocol, data.names)


def read_comparison_csv(path) -> list[dict]:
    with open(Path(path), newline="") as fh:
        return list(csv.DictReader(fh))
