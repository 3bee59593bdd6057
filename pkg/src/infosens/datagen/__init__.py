"""Synthetic optimization runs: blade geometry, surrogate fitness, evolution strategy."""

from .benchmark import planted_benchmark
from .es import EsConfig, GridSpec, RunRecord, best_so_far, records_to_dataset, run_es
from .geometry import (
    BladeGeometry,
    BladeParams,
    baseline_geometry,
    build_geometry,
    extract_features,
    feature_names,
    hh_maxima_locations,
    hicks_henne,
)
from .surrogate import DEFAULT_CONSTANTS, SurrogateConstants, surrogate_fitness

__all__ = [
    "BladeGeometry", "BladeParams", "DEFAULT_CONSTANTS", "EsConfig", "GridSpec", "RunRecord",
    "SurrogateConstants", "baseline_geometry", "best_so_far", "build_geometry", "extract_features",
    "feature_names", "hh_maxima_locations", "hicks_henne", "planted_benchmark", "records_to_dataset",
    "run_es", "surrogate_fitness",
]
