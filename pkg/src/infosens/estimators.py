"""Mutual information and conditional mutual information estimators.

Continuous estimates use the Kraskov-Stoegbauer-Grassberger nearest-neighbour
estimator (algorithm 1) and its Frenzel-Pompe extension to conditional MI;
discrete estimates are plug-in sums over empirical tables.

References
----------
Kraskov, A., Stoegbauer, H., & Grassberger, P. (2004). Estimating mutual
information. Physical Review E, 69(6), 066138.

Frenzel, S., & Pompe, B. (2007). Partial mutual information for coupling
analysis of multivariate time series. Physical Review Letters, 99(20), 204101.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _knn
from .data import add_tie_breaking_noise, pack_codes

LN2 = math.log(2.0)

# Asymptotic expansion coefficients B_2n / (2n) for psi(x) ~ ln x - 1/(2x) - sum c_n x^(-2n)
_PSI_SERIES = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x):
    """Digamma function for positive real arguments (scalar or array).

    Shifts the argument upward with ``psi(x) = psi(x + 1) - 1/x`` until it is
    at least 6, then sums the asymptotic series. Absolute error is below 1e-12
    over the positive reals.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("digamma is only defined here for x > 0")
    v = arr.copy()
    shift = np.zeros_like(v)
    small = v < 6.0
    while np.any(small):
        shift[small] += 1.0 / v[small]
        v[small] += 1.0
        small = v < 6.0
    inv2 = 1.0 / (v * v)
    series = np.zeros_like(v)
    for c in reversed(_PSI_SERIES):
        series = (series + c) * inv2
    out = np.log(v) - 0.5 / v - series - shift
    return float(out) if np.ndim(x) == 0 else out


@lru_cache(maxsize=16)
def _digamma_table(n: int) -> np.ndarray:
    """psi(m) for m = 0..n (entry 0 unused)."""
    table = np.empty(n + 1)
    table[0] = np.nan
    table[1:] = digamma(np.arange(1, n + 1, dtype=float))
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class KsgConfig:
    """Settings of the nearest-neighbour estimators.

    ``noise_amplitude`` is relative to the (standardized) column SD;
    ``unit`` is ``"nats"`` or ``"bits"``.
    """

    k: int = 4
    noise_amplitude: float = 1e-8
    seed: int = 0
    unit: str = "nats"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.noise_amplitude < 0:
            raise ValueError("noise_amplitude must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.unit not in ("nats", "bits"):
            raise ValueError(f"unit must be 'nats' or 'bits', got {self.unit!r}")

    def convert(self, nats: float) -> float:
        return nats / LN2 if self.unit == "bits" else nats


@dataclass(frozen=True)
class MiEstimate:
    value: float
    n_samples: int
    k: int

    def __float__(self):
        return float(self.value)


def _as_2d(a, name) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValueError(f"{name} must be 1-D or 2-D")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def prepare(a, cfg: KsgConfig) -> np.ndarray:
    """Standardize each column and add tie-breaking noise.

    The noise seed is keyed on ``cfg.seed`` and the column's raw bytes, so a
    given column receives the same noise whatever argument position it takes.
    """
    a = _as_2d(a, "input")
    out = np.empty_like(a)
    for j in range(a.shape[1]):
        col = np.ascontiguousarray(a[:, j])
        sd = col.std()
        z = col - col.mean()
        if sd > 0:
            z = z / sd
        key = (cfg.seed << 32) | zlib.crc32(col.tobytes())
        out[:, j] = add_tie_breaking_noise(z, cfg.noise_amplitude, key)
    return out


def _check_sizes(n: int, k: int, *arrays):
    for a in arrays:
        if a.shape[0] != n:
            raise ValueError("inputs must have the same number of samples")
    if n <= k:
        raise ValueError(f"need more samples than k (N={n}, k={k})")


def _mi_from_counts(k, n, nx, ny) -> float:
    psi = _digamma_table(n)
    return float(psi[k] + psi[n] - np.mean(psi[nx + 1] + psi[ny + 1]))


def _cmi_from_counts(k, n, nxz, nyz, nz) -> float:
    psi = _digamma_table(n)
    return float(psi[k] - np.mean(psi[nxz + 1] + psi[nyz + 1] - psi[nz + 1]))


def _bruteforce_distances(a: np.ndarray, rows: slice) -> np.ndarray:
    return np.abs(a[rows, None, :] - a[None, :, :]).max(axis=2)


def bruteforce_counts(spaces, joint, k, chunk=256):
    """Reference O(N^2) neighbour counts.

    Returns ``(eps, counts)`` where ``eps[i]`` is the k-th neighbour distance
    in ``joint`` and ``counts`` holds, for each marginal space, the number of
    other points strictly within ``eps[i]``.
    """
    n = joint.shape[0]
    eps = np.empty(n)
    counts = [np.empty(n, dtype=np.int64) for _ in spaces]
    for start in range(0, n, chunk):
        rows = slice(start, min(start + chunk, n))
        idx = np.arange(rows.start, rows.stop)
        dj = _bruteforce_distances(joint, rows)
        dj[idx - start, idx] = np.inf
        eps[rows] = np.sort(dj, axis=1)[:, k - 1]
        e = eps[rows][:, None]
        for out, space in zip(counts, spaces):
            ds = _bruteforce_distances(space, rows)
            ds[idx - start, idx] = np.inf
            out[rows] = (ds < e).sum(axis=1)
    return eps, counts


def ksg_mi(x, y, cfg: KsgConfig = KsgConfig(), method: str = "fast") -> MiEstimate:
    """KSG (algorithm 1) estimate of I(X;Y).

    Parameters
    ----------
    x, y : array_like, shape (N,) or (N, d)
    cfg : KsgConfig
    method : {"fast", "brute"}
        Neighbour search strategy; both give identical counts.
    """
    x = prepare(x, cfg)
    y = prepare(y, cfg)
    n = x.shape[0]
    _check_sizes(n, cfg.k, y)
    joint = np.ascontiguousarray(np.hstack([y, x]))
    if method == "brute":
        _, (nx, ny) = bruteforce_counts([x, y], joint, cfg.k)
    elif method == "fast":
        eps = _knn.knn_radius(joint, cfg.k)
        nx = _knn.count_within(np.ascontiguousarray(x), eps)
        ny = _knn.count_within(np.ascontiguousarray(y), eps)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MiEstimate(cfg.convert(_mi_from_counts(cfg.k, n, nx, ny)), n, cfg.k)


def ksg_cmi(x, y, z, cfg: KsgConfig = KsgConfig(), method: str = "fast") -> MiEstimate:
    """Frenzel-Pompe estimate of I(X;Y|Z); an empty ``z`` reduces to :func:`ksg_mi`."""
    z = None if z is None else np.asarray(z, dtype=float)
    if z is None or z.size == 0 or (z.ndim == 2 and z.shape[1] == 0):
        return ksg_mi(x, y, cfg, method)
    x = prepare(x, cfg)
    y = prepare(y, cfg)
    z = prepare(z, cfg)
    n = x.shape[0]
    _check_sizes(n, cfg.k, y, z)
    joint = np.ascontiguousarray(np.hstack([y, x, z]))
    xz = np.ascontiguousarray(np.hstack([x, z]))
    yz = np.ascontiguousarray(np.hstack([y, z]))
    if method == "brute":
        _, (nxz, nyz, nz) = bruteforce_counts([xz, yz, z], joint, cfg.k)
    elif method == "fast":
        eps = _knn.knn_radius(joint, cfg.k)
        nxz = _knn.count_within(xz, eps)
        nyz = _knn.count_within(yz, eps)
        nz = _knn.count_within(np.ascontiguousarray(z), eps)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MiEstimate(cfg.convert(_cmi_from_counts(cfg.k, n, nxz, nyz, nz)), n, cfg.k)


def default_prefix(n: int) -> int:
    return max(256, n // 8)


def conditioning_rows(z, cfg: KsgConfig = KsgConfig(), prefix: int | None = None):
    """Precomputed distance structure of a conditioning set, shareable between
    :class:`FixedContextCmi` instances that condition on the same ``z``."""
    z = prepare(z, cfg)
    return _SortedRows(z, default_prefix(z.shape[0]) if prefix is None else prefix)


class _SortedRows:
    """Pairwise max-norm distances with the smallest ``m`` entries of each row sorted."""

    def __init__(self, pts: np.ndarray, prefix: int):
        n = pts.shape[0]
        self.raw = _knn.distance_matrix(np.ascontiguousarray(pts))
        m = min(n, max(prefix, 1))
        if m < n:
            # the diagonal is forced into every prefix, even among tied zeros
            keyed = self.raw.copy()
            np.fill_diagonal(keyed, -1.0)
            idx = np.argpartition(keyed, m - 1, axis=1)[:, :m]
            del keyed
            vals = np.take_along_axis(self.raw, idx, axis=1)
            o = np.argsort(vals, axis=1, kind="stable")
            idx = np.take_along_axis(idx, o, axis=1)
        else:
            idx = np.argsort(self.raw, axis=1, kind="stable")
        self.idx = np.ascontiguousarray(idx, dtype=np.int64)
        self.vals = np.ascontiguousarray(np.take_along_axis(self.raw, self.idx, axis=1))

    def count(self, eps) -> np.ndarray:
        return _knn.count_prefix(self.vals, self.idx, self.raw, eps)


class FixedContextCmi:
    """Repeated estimates of I(X;Y|Z) for fixed X and Z and varying 1-D Y.

    Precomputes the pairwise max-norm distances of the (X, Z) and Z spaces,
    so each call only combines them with the distances along Y. Results equal
    :func:`ksg_cmi` (or :func:`ksg_mi` when Z is empty) bit for bit.
    Memory is O(N^2); ``prefix`` bounds how many sorted neighbours are kept
    per row (rows needing more fall back to an exact full scan).
    """

    def __init__(self, x, z, cfg: KsgConfig = KsgConfig(), prefix: int | None = None,
                 z_rows: "_SortedRows | None" = None):
        self.cfg = cfg
        x = prepare(x, cfg)
        self.n = x.shape[0]
        if prefix is None:
            prefix = default_prefix(self.n)
        if z is not None:
            z = np.asarray(z, dtype=float)
            if z.size == 0 or (z.ndim == 2 and z.shape[1] == 0):
                z = None
        if z is None:
            self._z = None
            self._base = _SortedRows(x, prefix)
        else:
            z = prepare(z, cfg)
            _check_sizes(self.n, cfg.k, z)
            self._z = z_rows if z_rows is not None else _SortedRows(z, prefix)
            self._base = _SortedRows(np.hstack([x, z]), prefix)

    def estimate(self, y) -> MiEstimate:
        cfg = self.cfg
        y = prepare(y, cfg)
        _check_sizes(self.n, cfg.k, y)
        if y.shape[1] != 1:
            raise ValueError("FixedContextCmi supports a 1-D target only")
        y = np.ascontiguousarray(y[:, 0])
        b = self._base
        eps = _knn.knn_walk(y, b.vals, b.idx, b.raw, cfg.k)
        n_base = b.count(eps)
        if self._z is None:
            ny = _knn.count_y_only(y, eps)
            value = _mi_from_counts(cfg.k, self.n, n_base, ny)
        else:
            zr = self._z
            nz = zr.count(eps)
            nyz = _knn.count_joint_y(y, zr.vals, zr.idx, zr.raw, eps, nz)
            value = _cmi_from_counts(cfg.k, self.n, n_base, nyz, nz)
        return MiEstimate(cfg.convert(value), self.n, cfg.k)


# ---------------------------------------------------------------------------
# discrete plug-in estimators (bits)


def _codes(a, name) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim == 2:
        return pack_codes(a)
    a = a.astype(np.int64)
    if a.size and a.min() < 0:
        raise ValueError(f"{name}: codes must be non-negative")
    return a


def entropy(*columns) -> float:
    """Plug-in joint entropy (bits) of one or more code columns."""
    joint = pack_codes(*[_codes(c, "codes") for c in columns])
    counts = np.bincount(joint)
    p = counts[counts > 0] / joint.shape[0]
    return float(-np.sum(p * np.log2(p)))


def _table(*codes) -> np.ndarray:
    dense = [np.unique(c, return_inverse=True)[1].ravel() for c in codes]
    table = np.zeros([int(d.max()) + 1 for d in dense])
    np.add.at(table, tuple(dense), 1.0)
    return table


def discrete_mi(x, y) -> float:
    """Plug-in I(X;Y) in bits over the observed cells of the joint table.

    Terms are formed from integer counts and summed exactly rounded, so the
    result does not depend on argument order.
    """
    x = _codes(x, "x")
    y = _codes(y, "y")
    if x.shape[0] != y.shape[0]:
        raise ValueError("length mismatch")
    n = float(x.shape[0])
    c = _table(x, y)
    cx = c.sum(axis=1)
    cy = c.sum(axis=0)
    a, b = np.nonzero(c)
    cell = c[a, b]
    terms = cell / n * np.log2(cell * n / (cx[a] * cy[b]))
    return max(math.fsum(terms), 0.0)


def discrete_cmi(x, y, z) -> float:
    """Plug-in I(X;Y|Z) in bits; ``z`` may be 2-D (packed into one joint code)."""
    x = _codes(x, "x")
    y = _codes(y, "y")
    z = _codes(z, "z")
    if not (x.shape[0] == y.shape[0] == z.shape[0]):
        raise ValueError("length mismatch")
    n = float(x.shape[0])
    c = _table(x, y, z)
    cz = c.sum(axis=(0, 1))
    cxz = c.sum(axis=1)
    cyz = c.sum(axis=0)
    a, b, k = np.nonzero(c)
    cell = c[a, b, k]
    terms = cell / n * np.log2(cell * cz[k] / (cxz[a, k] * cyz[b, k]))
    return max(math.fsum(terms), 0.0)
