"""Permutation tests for CMI estimates with family-wise error control.

The maximum-statistic scheme compares the winning candidate's estimate with
the distribution of the *largest* estimate over all candidates on surrogate
data. Surrogates permute the target, which destroys every feature-target
dependence while keeping the correlation structure among candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimators import FixedContextCmi, KsgConfig, conditioning_rows

MIN_PERMUTATIONS = 19


@dataclass(frozen=True)
class PermTestConfig:
    n_perm: int = 200
    alpha_crit: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.n_perm < MIN_PERMUTATIONS:
            raise ValueError(f"n_perm must be >= {MIN_PERMUTATIONS}, got {self.n_perm}")
        if not 0 < self.alpha_crit < 1:
            raise ValueError(f"alpha_crit must lie in (0, 1), got {self.alpha_crit}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class TestOutcome:
    statistic: float
    p_value: float
    significant: bool
    null_distribution: np.ndarray

    __test__ = False  # not a pytest class


def permute(column, seed: int) -> np.ndarray:
    """Uniformly random permutation of ``column`` (Fisher-Yates), fixed by ``seed``."""
    column = np.asarray(column)
    if column.shape[0] < 2:
        raise ValueError("need at least 2 samples to permute")
    return column[np.random.default_rng(seed).permutation(column.shape[0])]


def surrogate_targets(target, cfg: PermTestConfig) -> list[np.ndarray]:
    """The permuted targets of surrogates 1..n_perm (seed ``cfg.seed + r``)."""
    return [permute(target, cfg.seed + r) for r in range(1, cfg.n_perm + 1)]


def p_value(statistic: float, null) -> float:
    null = np.asarray(null, dtype=float)
    return float((1 + np.count_nonzero(null >= statistic)) / (1 + null.shape[0]))


def outcome(statistic: float, null, cfg: PermTestConfig) -> TestOutcome:
    null = np.asarray(null, dtype=float)
    null.setflags(write=False)
    p = p_value(statistic, null)
    return TestOutcome(float(statistic), p, p < cfg.alpha_crit, null)


def candidate_statistics(candidates, target, cond, ksg: KsgConfig, cfg: PermTestConfig):
    """Original and surrogate CMI of every candidate.

    Returns ``(stats, table)`` with ``stats[c] = I(X_c; Y | cond)`` and
    ``table[c, r]`` the same estimate on surrogate ``r + 1``. Candidates are
    processed one at a time so memory stays at one distance structure.
    """
    if len(candidates) == 0:
        raise ValueError("empty candidate list")
    cond = _as_cond(cond, np.asarray(target).shape[0])
    z_rows = conditioning_rows(cond, ksg) if cond is not None else None
    surrogates = surrogate_targets(target, cfg)
    stats = np.empty(len(candidates))
    table = np.empty((len(candidates), cfg.n_perm))
    for c, x in enumerate(candidates):
        ev = FixedContextCmi(x, cond, ksg, z_rows=z_rows)
        stats[c] = ev.estimate(target).value
        for r, y in enumerate(surrogates):
            table[c, r] = ev.estimate(y).value
    return stats, table


def max_stat_test(candidates, winner_index: int, target, cond, ksg: KsgConfig = KsgConfig(),
                  cfg: PermTestConfig = PermTestConfig()) -> TestOutcome:
    """Maximum-statistic permutation test of the winning candidate's CMI.

    Parameters
    ----------
    candidates : sequence of array_like, each shape (N,)
        All remaining candidate columns.
    winner_index : int
        Index (into ``candidates``) of the candidate with maximal CMI.
    target : array_like, shape (N,)
    cond : array_like, shape (N, d) or None
        Conditioning set; zero columns gives a plain MI test.
    """
    if len(candidates) == 0:
        raise ValueError("empty candidate list")
    if not 0 <= winner_index < len(candidates):
        raise IndexError(f"winner_index {winner_index} out of range")
    stats, table = candidate_statistics(candidates, target, cond, ksg, cfg)
    return outcome(stats[winner_index], table.max(axis=0), cfg)


def _as_cond(cond, n):
    if cond is None:
        return None
    cond = np.asarray(cond, dtype=float)
    if cond.ndim == 1:
        cond = cond[:, None]
    if cond.shape[1] == 0:
        return None
    if cond.shape[0] != n:
        raise ValueError("conditioning set and target lengths differ")
    return cond
