"""Partial information decomposition of two discrete sources about a target.

Redundancy is the Williams-Beer I_min measure, the expected minimum specific
information the sources carry about each target outcome. The unique and
synergistic atoms follow from the classical mutual informations:

    I(Y;X)   = unique_x + redundancy
    I(Y;Z)   = unique_z + redundancy
    I(Y;X,Z) = unique_x + unique_z + redundancy + synergy
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .data import DEFAULT_N_BINS, Dataset, bin_equal_frequency

SOURCES = ("X", "Z")


@dataclass(frozen=True)
class JointPmf:
    """Probability table ``p[x, z, y]``."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 3 or min(p.shape) < 1:
            raise ValueError(f"pmf must be a non-empty 3-D table, got shape {p.shape}")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("pmf entries must be finite and non-negative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"pmf sums to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def shape(self):
        return self.p.shape

    def marginal(self, source: str) -> np.ndarray:
        """Joint table p(a, y) of one source with the target."""
        if source == "X":
            return _fsum_axis(self.p, 1)
        if source == "Z":
            return _fsum_axis(self.p, 0)
        raise ValueError(f"source must be 'X' or 'Z', got {source!r}")

    @property
    def p_y(self) -> np.ndarray:
        return _fsum_axis(self.p.reshape(-1, self.p.shape[2]), 0)

    def swapped(self) -> "JointPmf":
        return JointPmf(self.p.transpose(1, 0, 2))


@dataclass(frozen=True)
class PidResult:
    unique_x: float
    unique_z: float
    redundancy: float
    synergy: float
    joint_mi: float
    mi_x: float
    mi_z: float


def pmf_from_samples(x, z, y) -> JointPmf:
    x, z, y = (np.asarray(a, dtype=np.int64).ravel() for a in (x, z, y))
    if not (x.shape == z.shape == y.shape):
        raise ValueError("length mismatch")
    if x.size == 0:
        raise ValueError("no samples")
    if min(x.min(), z.min(), y.min()) < 0:
        raise ValueError("codes must be non-negative")
    table = np.zeros((x.max() + 1, z.max() + 1, y.max() + 1))
    np.add.at(table, (x, z, y), 1.0)
    return JointPmf(table / x.size)


# Exactly rounded sums keep every quantity independent of summation order, so
# swapping the two sources reproduces the atoms bit for bit.
def _fsum_axis(p: np.ndarray, axis: int) -> np.ndarray:
    return np.apply_along_axis(math.fsum, axis, p)


def _mi(pab: np.ndarray) -> float:
    pa = _fsum_axis(pab, 1)
    pb = _fsum_axis(pab, 0)
    return math.fsum(
        pab[a, b] * math.log2(pab[a, b] / (pa[a] * pb[b]))
        for a, b in zip(*np.nonzero(pab > 0))
    )


def _specific(pay: np.ndarray, y: int) -> float:
    py = math.fsum(pay[:, y])
    pa = _fsum_axis(pay, 1)
    return math.fsum(
        pay[a, y] / py * (math.log2(pay[a, y] / pa[a]) - math.log2(py))
        for a in range(pay.shape[0]) if pay[a, y] > 0
    )


def specific_information(pmf: JointPmf, source: str, y_value: int) -> float:
    """Information (bits) the source provides about the outcome ``Y = y_value``."""
    pay = pmf.marginal(source)
    if not 0 <= y_value < pay.shape[1] or pay[:, y_value].sum() <= 0:
        raise ValueError(f"target value {y_value} has zero probability")
    return _specific(pay, y_value)


def pid_decompose(pmf: JointPmf) -> PidResult:
    """Williams-Beer decomposition of I(Y; X, Z) into four atoms (bits)."""
    if not isinstance(pmf, JointPmf):
        pmf = JointPmf(pmf)
    pxy = pmf.marginal("X")
    pzy = pmf.marginal("Z")
    py = pmf.p_y
    redundancy = math.fsum(
        py[y] * min(_specific(pxy, y), _specific(pzy, y))
        for y in range(py.shape[0]) if py[y] > 0
    )
    mi_x = _mi(pxy)
    mi_z = _mi(pzy)
    joint_mi = _mi(pmf.p.reshape(-1, py.shape[0]))
    return PidResult(
        unique_x=mi_x - redundancy,
        unique_z=mi_z - redundancy,
        redundancy=redundancy,
        synergy=joint_mi - (mi_x + mi_z) + redundancy,
        joint_mi=joint_mi,
        mi_x=mi_x,
        mi_z=mi_z,
    )


@dataclass(frozen=True)
class SynergyMatrix:
    """Pairwise decompositions ``(X_i, X_j; target)`` over a selected feature set."""

    features: tuple[int, ...]
    names: tuple[str, ...]
    results: dict
    top_pairs: tuple[tuple[int, int], ...]

    def synergy(self) -> np.ndarray:
        """Upper-triangular matrix of synergies in ``features`` order (NaN elsewhere)."""
        k = len(self.features)
        out = np.full((k, k), np.nan)
        pos = {f: i for i, f in enumerate(self.features)}
        for (a, b), r in self.results.items():
            i, j = sorted((pos[a], pos[b]))
            out[i, j] = r.synergy
        return out


def synergy_matrix(data: Dataset, selected, n_bins: int = DEFAULT_N_BINS, n_top: int = 3) -> SynergyMatrix:
    """Decompose every unordered pair of selected features against the binned target.

    ``top_pairs`` lists the ``n_top`` pairs with the largest synergy; ties go
    to the lexicographically smaller pair of feature indices.
    """
    selected = tuple(int(s) for s in selected)
    if len(selected) < 2:
        raise ValueError("need at least 2 selected features")
    if len(set(selected)) != len(selected):
        raise ValueError("selected features must be distinct")
    codes = {f: bin_equal_frequency(data.values[:, f], n_bins) for f in selected}
    y = bin_equal_frequency(data.target, n_bins)
    results = {}
    for a, b in combinations(selected, 2):
        pair = (a, b) if a < b else (b, a)
        results[pair] = pid_decompose(pmf_from_samples(codes[pair[0]], codes[pair[1]], y))
    ranked = sorted(results, key=lambda pr: (-results[pr].synergy, pr))
    return SynergyMatrix(selected, tuple(data.names[f] for f in selected), results,
                         tuple(ranked[:n_top]))
