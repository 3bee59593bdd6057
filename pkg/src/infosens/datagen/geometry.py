"""Parametrized blade geometry: control sections, Hicks-Henne bumps, feature probes.

A blade is described by span stations from hub (span 0) to shroud (span 1).
Each station carries a leading-edge point, a trailing-edge point and a
half-thickness profile (distance of the surface from the chord line) on a
fixed chord grid. Shape parameters act on three control stations at hub,
mid-span and shroud; stations in between blend the deformations of the two
bracketing control stations linearly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CONTROL_SPANS = (0.0, 0.5, 1.0)
SECTION_LABELS = ("hub", "mid", "shroud")
CHORD_GRID = np.linspace(0.0, 1.0, 201)

# Parameter magnitudes for one relative unit (box bounds are +-1 relative units).
ROTATION_SCALE = 0.08  # rad
TRANSLATION_SCALE = 0.05  # chord units
HH_SCALE = 0.01  # chord units


def hicks_henne(x, x0: float):
    """Hicks-Henne bump ``sin(pi * x**(log 0.5 / log x0))**2``; maximum 1 at ``x0``, zero at both ends."""
    if not 0.0 < x0 < 1.0:
        raise ValueError(f"x0 must lie in (0, 1), got {x0}")
    xa = np.asarray(x, dtype=float)
    if np.any((xa < 0.0) | (xa > 1.0)):
        raise ValueError("x must lie in [0, 1]")
    expo = math.log(0.5) / math.log(x0)
    out = np.sin(np.pi * xa ** expo) ** 2
    out = np.where(xa == 1.0, 0.0, out)  # sin(pi) is not exactly 0 in floating point
    return float(out) if np.ndim(x) == 0 else out


def hh_maxima_locations(n_hh: int) -> np.ndarray:
    """Bump maxima ``i / (n_hh + 1)`` for ``i = 1..n_hh``."""
    if n_hh < 1:
        raise ValueError("n_hh must be >= 1")
    return np.arange(1, n_hh + 1) / (n_hh + 1)


@dataclass(frozen=True)
class BladeParams:
    """Shape parameters per control section (rows: hub, mid, shroud).

    rotation in radians about the section's LE point, dx/dy translations in
    chord units, hh the Hicks-Henne amplitudes (chord units).
    """

    rotation: np.ndarray
    dx: np.ndarray
    dy: np.ndarray
    hh: np.ndarray

    def __post_init__(self):
        for name in ("rotation", "dx", "dy"):
            v = np.array(getattr(self, name), dtype=float).reshape(-1)
            if v.shape != (3,):
                raise ValueError(f"{name} needs one value per control section")
            object.__setattr__(self, name, v)
        hh = np.array(self.hh, dtype=float)
        if hh.ndim != 2 or hh.shape[0] != 3 or hh.shape[1] < 1:
            raise ValueError("hh must have shape (3, n_hh) with n_hh >= 1")
        object.__setattr__(self, "hh", hh)

    @property
    def n_hh(self) -> int:
        return self.hh.shape[1]

    @property
    def n_params(self) -> int:
        return 3 * (self.n_hh + 3)

    @classmethod
    def zeros(cls, n_hh: int) -> "BladeParams":
        return cls(np.zeros(3), np.zeros(3), np.zeros(3), np.zeros((3, n_hh)))

    @classmethod
    def from_relative(cls, u, n_hh: int) -> "BladeParams":
        """Map a vector of relative units (layout of :meth:`to_relative`) to physical values."""
        u = np.asarray(u, dtype=float).reshape(3, n_hh + 3)
        return cls(u[:, 0] * ROTATION_SCALE, u[:, 1] * TRANSLATION_SCALE,
                   u[:, 2] * TRANSLATION_SCALE, u[:, 3:] * HH_SCALE)

    def to_relative(self) -> np.ndarray:
        """Flat vector: per section [rotation, dx, dy, hh_1..hh_n] in relative units."""
        return np.column_stack([self.rotation / ROTATION_SCALE, self.dx / TRANSLATION_SCALE,
                                self.dy / TRANSLATION_SCALE, self.hh / HH_SCALE]).ravel()

    @staticmethod
    def names(n_hh: int) -> list[str]:
        out = []
        for s in SECTION_LABELS:
            out += [f"{s}_rot", f"{s}_dx", f"{s}_dy"] + [f"{s}_hh{i + 1}" for i in range(n_hh)]
        return out


@dataclass(frozen=True)
class BladeGeometry:
    span: np.ndarray  # (S,)
    le: np.ndarray  # (S, 2)
    te: np.ndarray  # (S, 2)
    thickness: np.ndarray  # (S, G) on CHORD_GRID
    chord_grid: np.ndarray = CHORD_GRID

    @property
    def n_stations(self) -> int:
        return self.span.shape[0]

    def at_spans(self, spans) -> "BladeGeometry":
        """Linear re-interpolation along the span (exact copies at existing stations)."""
        spans = np.asarray(spans, dtype=float)
        le = np.empty((spans.size, 2))
        te = np.empty((spans.size, 2))
        th = np.empty((spans.size, self.chord_grid.size))
        for k, s in enumerate(spans):
            i, j, w = _bracket(self.span, s)
            le[k] = w * self.le[i] + (1.0 - w) * self.le[j]
            te[k] = w * self.te[i] + (1.0 - w) * self.te[j]
            th[k] = w * self.thickness[i] + (1.0 - w) * self.thickness[j]
        return BladeGeometry(spans, le, te, th, self.chord_grid)

    def thickness_at(self, span: float, x: float) -> float:
        st = self.at_spans([span])
        return float(np.interp(x, st.chord_grid, st.thickness[0]))


def _bracket(spans: np.ndarray, s: float):
    """Indices (i, j) and weight w so the value at ``s`` is ``w*v[i] + (1-w)*v[j]``."""
    if s < spans[0] - 1e-12 or s > spans[-1] + 1e-12:
        raise ValueError(f"span {s} outside [{spans[0]}, {spans[-1]}]")
    hit = np.nonzero(spans == s)[0]
    if hit.size:
        return int(hit[0]), int(hit[0]), 1.0
    j = int(np.searchsorted(spans, s))
    i = j - 1
    w = (spans[j] - s) / (spans[j] - spans[i])
    return i, j, float(w)


def naca_half_thickness(x, t_max: float):
    """Symmetric 4-digit NACA half-thickness with a closed trailing edge."""
    x = np.asarray(x, dtype=float)
    return 5.0 * t_max * (0.2969 * np.sqrt(x) - 0.1260 * x - 0.3516 * x**2 + 0.2843 * x**3 - 0.1036 * x**4)


def baseline_geometry() -> BladeGeometry:
    """Reference blade: three control stations with swept LE, twisted and thinning sections.

    hub:    LE (0.00, 0), stagger 0.55 rad, chord 1.00, 10 % thick
    mid:    LE (0.05, 0), stagger 0.85 rad, chord 1.10,  7 % thick
    shroud: LE (0.12, 0), stagger 1.05 rad, chord 1.20,  4.5 % thick
    """
    le = np.array([[0.0, 0.0], [0.05, 0.0], [0.12, 0.0]])
    stagger = np.array([0.55, 0.85, 1.05])
    chord = np.array([1.0, 1.1, 1.2])
    te = le + chord[:, None] * np.column_stack([np.cos(stagger), np.sin(stagger)])
    th = np.vstack([naca_half_thickness(CHORD_GRID, t) for t in (0.10, 0.07, 0.045)])
    th[:, -1] = 0.0
    return BladeGeometry(np.array(CONTROL_SPANS), le, te, th)


def _section_deformation(p: BladeParams, grid: np.ndarray) -> np.ndarray:
    """Thickness increments of the three control sections, shape (3, G)."""
    bumps = np.vstack([hicks_henne(grid, x0) for x0 in hh_maxima_locations(p.n_hh)])
    return p.hh @ bumps


def build_geometry(baseline: BladeGeometry, p: BladeParams, n_stations: int = 3) -> BladeGeometry:
    """Apply rotation, translation and Hicks-Henne deformation to a baseline blade.

    The result has ``n_stations`` equally spaced span stations; each station
    blends the deformations of its two bracketing control sections linearly.
    """
    if n_stations < 3:
        raise ValueError("n_stations must be >= 3")
    if not set(CONTROL_SPANS) <= set(np.asarray(baseline.span).tolist()):
        raise ValueError("baseline must contain stations at hub, mid-span and shroud")
    spans = np.linspace(0.0, 1.0, n_stations)
    base = baseline.at_spans(spans)
    dthick = _section_deformation(p, baseline.chord_grid)
    ctrl = np.array(CONTROL_SPANS)
    le = base.le.copy()
    te = base.te.copy()
    th = base.thickness.copy()
    for k, s in enumerate(spans):
        i, j, w = _bracket(ctrl, s)
        rot = w * p.rotation[i] + (1.0 - w) * p.rotation[j]
        shift = np.array([w * p.dx[i] + (1.0 - w) * p.dx[j], w * p.dy[i] + (1.0 - w) * p.dy[j]])
        c, sn = math.cos(rot), math.sin(rot)
        rel = base.te[k] - base.le[k]
        # (R - I) @ rel keeps zero rotations exact
        te[k] = base.te[k] + np.array([(c - 1.0) * rel[0] - sn * rel[1], sn * rel[0] + (c - 1.0) * rel[1]]) + shift
        le[k] = base.le[k] + shift
        th[k] = base.thickness[k] + (w * dthick[i] + (1.0 - w) * dthick[j])
    return BladeGeometry(spans, le, te, th, baseline.chord_grid)


def feature_spans(n_sections: int) -> np.ndarray:
    if n_sections < 1:
        raise ValueError("n_sections must be >= 1")
    return np.array([0.5]) if n_sections == 1 else np.linspace(0.0, 1.0, n_sections)


def feature_chords(n_points: int) -> np.ndarray:
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    return np.arange(1, n_points + 1) / (n_points + 1)


def feature_names(n_sections: int, n_points: int) -> list[str]:
    """Per section (1 = hub): LE x/y, the chord probes, TE x/y."""
    names = []
    for n in range(1, n_sections + 1):
        names += [f"s{n}_LEx", f"s{n}_LEy"] + [f"s{n}_p{m}" for m in range(1, n_points + 1)]
        names += [f"s{n}_TEx", f"s{n}_TEy"]
    return names


def extract_features(g: BladeGeometry, n_sections: int, n_points: int) -> np.ndarray:
    """Sectional-cut features; ``n_sections * n_points + 4 * n_sections`` values.

    Sections are equally spaced from hub to shroud (re-interpolated from the
    geometry's stations); probes record the absolute surface-to-chord distance
    at ``n_points`` equally spaced interior chord fractions.
    """
    st = g.at_spans(feature_spans(n_sections))
    xs = feature_chords(n_points)
    out = []
    for k in range(st.n_stations):
        probes = np.abs(np.interp(xs, st.chord_grid, st.thickness[k]))
        out.extend([st.le[k, 0], st.le[k, 1], *probes, st.te[k, 0], st.te[k, 1]])
    return np.asarray(out)
