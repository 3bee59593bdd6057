"""(mu, lambda) evolution strategy producing logged optimization runs.

Offspring are sampled around the parent centroid with isotropic Gaussian
mutation in relative parameter units and clipped to the +-1 box. The step
size follows the 1/5th-success rule: a generation's success rate is the
fraction of offspring that beat the best parent of the previous generation.
Every offspring evaluation is logged; the baseline evaluation is not.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..data import Dataset
from .geometry import BladeGeometry, BladeParams, baseline_geometry, build_geometry, extract_features, feature_names
from .surrogate import DEFAULT_CONSTANTS, SurrogateConstants, surrogate_fitness

SUCCESS_TARGET = 0.2
SIGMA_DAMPING = 3.0
SIGMA_MIN = 1e-6
SIGMA_MAX = 1.0


@dataclass(frozen=True)
class EsConfig:
    lam: int = 12
    mu: int = 4
    generations: int = 161
    sigma0: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.lam < 1 or self.mu < 1 or self.generations < 1:
            raise ValueError("lambda, mu and generations must be >= 1")
        if self.mu > self.lam:
            raise ValueError(f"mu exceeds lambda ({self.mu} > {self.lam})")
        if not self.sigma0 > 0:
            raise ValueError("sigma0 must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class RunRecord:
    generation: int
    params: np.ndarray  # relative units, BladeParams.to_relative layout
    features: np.ndarray
    fitness: float


@dataclass(frozen=True)
class GridSpec:
    """Feature grid and geometry resolution used when logging a run."""

    n_sections: int = 3
    n_points: int = 2
    n_stations: int = 11


def _evaluate(u, n_hh, baseline, grid: GridSpec, const):
    g = build_geometry(baseline, BladeParams.from_relative(u, n_hh), grid.n_stations)
    return extract_features(g, grid.n_sections, grid.n_points), surrogate_fitness(g, const)


def offspring_rng(seed: int, generation: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, generation, index])


def run_es(cfg: EsConfig, n_hh: int, baseline: BladeGeometry | None = None, grid: GridSpec = GridSpec(),
           const: SurrogateConstants = DEFAULT_CONSTANTS, threads: int = 1) -> list[RunRecord]:
    """Run the strategy and return all ``lam * generations`` evaluations in order.

    Parameters
    ----------
    cfg : EsConfig
    n_hh : int
        Hicks-Henne functions per control section.
    baseline : BladeGeometry, optional
        Defaults to :func:`baseline_geometry`.
    grid : GridSpec
        Feature extraction grid.
    threads : int
        Worker count for offspring evaluation; results do not depend on it.
    """
    if n_hh < 1:
        raise ValueError("n_hh must be >= 1")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    baseline = baseline_geometry() if baseline is None else baseline
    dim = 3 * (n_hh + 3)
    mean = np.zeros(dim)
    sigma = cfg.sigma0
    _, reference = _evaluate(mean, n_hh, baseline, grid, const)
    records: list[RunRecord] = []
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        for gen in range(cfg.generations):
            us = [np.clip(mean + sigma * offspring_rng(cfg.seed, gen, i).standard_normal(dim), -1.0, 1.0)
                  for i in range(cfg.lam)]
            if pool is None:
                evals = [_evaluate(u, n_hh, baseline, grid, const) for u in us]
            else:
                evals = list(pool.map(lambda u: _evaluate(u, n_hh, baseline, grid, const), us))
            fit = np.array([f for _, f in evals])
            for u, (feat, f) in zip(us, evals):
                records.append(RunRecord(gen, u, feat, float(f)))
            order = np.argsort(fit, kind="stable")[: cfg.mu]
            mean = np.mean([us[i] for i in order], axis=0)
            success = np.count_nonzero(fit < reference) / cfg.lam
            sigma *= math.exp((success - SUCCESS_TARGET) / (1.0 - SUCCESS_TARGET) / SIGMA_DAMPING)
            sigma = min(max(sigma, SIGMA_MIN), SIGMA_MAX)
            reference = float(fit[order[0]])
    finally:
        if pool is not None:
            pool.shutdown()
    return records


def best_so_far(records: list[RunRecord]) -> np.ndarray:
    """Running minimum of fitness at the end of each generation."""
    gens = max(r.generation for r in records) + 1
    best = np.full(gens, np.inf)
    for r in records:
        best[r.generation] = min(best[r.generation], r.fitness)
    return np.minimum.accumulate(best)


def records_to_dataset(records: list[RunRecord], grid: GridSpec, meta: dict | None = None) -> Dataset:
    if not records:
        raise ValueError("no records")
    values = np.vstack([r.features for r in records])
    target = np.array([r.fitness for r in records])
    return Dataset(values, tuple(feature_names(grid.n_sections, grid.n_points)), target, dict(meta or {}))

