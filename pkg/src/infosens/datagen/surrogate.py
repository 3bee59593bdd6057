"""Analytic surrogate of blade efficiency and the penalized fitness.

The surrogate depends on five geometric probes:

    t_tip  half-thickness at the shroud section, 30 % chord
    y_tip  circumferential TE coordinate at the shroud section
    t_hub  half-thickness at the hub section, 50 % chord
    t_mid  half-thickness at mid-span, 30 % chord
    y_mid  circumferential TE coordinate at mid-span

With normalized deviations ``d_i = (probe_i - target_i) / scale_i``::

    eta = eta0 - a d_tip^2 - b d_ytip^2 - c d_hub^2 - d d_mid d_ymid - e (d_mid^2 + d_ymid^2)
    fitness = 1 - eta + kappa * sum_stations max(0, -min_x t(x))

The product term couples the two mid-span probes; the ``e`` confinement
(with ``e > d/2``) keeps the optimum unique at all deviations zero, where
``eta = eta0``. Targets are stored as offsets from the baseline blade's probes.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .geometry import BladeGeometry, baseline_geometry

SURROGATE_VERSION = "1"
PROBES = ("t_tip", "y_tip", "t_hub", "t_mid", "y_mid")


@dataclass(frozen=True)
class SurrogateConstants:
    eta0: float = 0.92
    a: float = 0.010
    b: float = 0.008
    c: float = 0.005
    d: float = 0.004
    e: float = 0.004
    kappa: float = 10.0
    # probe targets as offsets from the baseline, in probe units
    off_t_tip: float = 0.006
    off_y_tip: float = -0.03
    off_t_hub: float = -0.004
    off_t_mid: float = 0.005
    off_y_mid: float = 0.02
    scale_thickness: float = 0.005
    scale_te: float = 0.05

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.e) <= 0:
            raise ValueError("a, b, c and e must be positive")
        if abs(self.d) >= 2 * self.e:
            raise ValueError("|d| must be below 2e for a unique optimum")
        if self.kappa <= 0 or self.scale_thickness <= 0 or self.scale_te <= 0:
            raise ValueError("kappa and scales must be positive")

    def as_dict(self) -> dict:
        return {"surrogate_version": SURROGATE_VERSION, **asdict(self)}

    @property
    def scales(self) -> np.ndarray:
        st, sy = self.scale_thickness, self.scale_te
        return np.array([st, sy, st, st, sy])

    @property
    def offsets(self) -> np.ndarray:
        return np.array([self.off_t_tip, self.off_y_tip, self.off_t_hub, self.off_t_mid, self.off_y_mid])


DEFAULT_CONSTANTS = SurrogateConstants()


def probe_values(g: BladeGeometry) -> np.ndarray:
    """The five probes in ``PROBES`` order."""
    st = g.at_spans([0.0, 0.5, 1.0])
    grid = st.chord_grid
    return np.array([
        np.interp(0.3, grid, st.thickness[2]),
        st.te[2, 1],
        np.interp(0.5, grid, st.thickness[0]),
        np.interp(0.3, grid, st.thickness[1]),
        st.te[1, 1],
    ])


@lru_cache(maxsize=1)
def _baseline_probes() -> np.ndarray:
    return probe_values(baseline_geometry())


def probe_targets(const: SurrogateConstants = DEFAULT_CONSTANTS) -> np.ndarray:
    return _baseline_probes() + const.offsets


def efficiency_from_probes(probes, const: SurrogateConstants = DEFAULT_CONSTANTS) -> float:
    dev = (np.asarray(probes, dtype=float) - probe_targets(const)) / const.scales
    d_tip, d_ytip, d_hub, d_mid, d_ymid = dev
    return float(const.eta0 - const.a * d_tip**2 - const.b * d_ytip**2 - const.c * d_hub**2
                 - const.d * d_mid * d_ymid - const.e * (d_mid**2 + d_ymid**2))


def surrogate_efficiency(g: BladeGeometry, const: SurrogateConstants = DEFAULT_CONSTANTS) -> float:
    return efficiency_from_probes(probe_values(g), const)


def thickness_penalty(g: BladeGeometry, const: SurrogateConstants = DEFAULT_CONSTANTS) -> float:
    """``kappa`` times the summed depth of negative thickness over all stations."""
    depth = np.maximum(0.0, -g.thickness.min(axis=1))
    return float(const.kappa * depth.sum())


def surrogate_fitness(g: BladeGeometry, const: SurrogateConstants = DEFAULT_CONSTANTS) -> float:
    """Penalized fitness ``1 - eta + P`` (lower is better)."""
    return 1.0 - surrogate_efficiency(g, const) + thickness_penalty(g, const)
