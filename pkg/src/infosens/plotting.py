"""Static figures for the report command.

Every function renders one figure to a file with the non-interactive Agg
backend and returns the written path. Styling lives in ``STYLE`` and is
applied through an rc context so importing this module leaves global
matplotlib state alone.
"""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
WIDTH = 5.0  # inches

STYLE = {
    "figure.figsize": (WIDTH, WIDTH * GOLDEN),
    "figure.dpi": 120,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.linewidth": 1.2,
    "lines.markersize": 4,
}

_FEATURE = re.compile(r"^s(\d+)_(LEx|LEy|TEx|TEy|p(\d+))$")


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_convergence(generation, fitness, path) -> Path:
    """Scatter of all evaluations and the running best against generation."""
    generation = np.asarray(generation)
    fitness = np.asarray(fitness, dtype=float)
    gens = np.unique(generation)
    per_gen = np.array([fitness[generation == g].min() for g in gens])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.scatter(generation, fitness, s=3, alpha=0.3, color="0.5", label="evaluations")
        ax.plot(gens, np.minimum.accumulate(per_gen), color="C0", label="best so far")
        ax.set_xlabel("generation")
        ax.set_ylabel("fitness")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_mae(series: dict, path, highlight: str = "CMI") -> Path:
    """MAE against feature-set size, one line per method; ``highlight`` drawn as a star."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for i, (method, pts) in enumerate(sorted(series.items())):
            sizes, vals = zip(*pts) if pts else ((), ())
            if method == highlight:
                ax.plot(sizes, vals, "k*", markersize=12, label=method, zorder=3)
            else:
                ax.plot(sizes, vals, "o-", color=f"C{i % 10}", alpha=0.8, label=method)
        ax.set_xlabel("feature set size")
        ax.set_ylabel("MAE")
        ax.legend(frameon=False, ncol=2)
        return _save(fig, path)


def plot_synergy(matrix: np.ndarray, names, path) -> Path:
    """Heat map of pairwise synergy (bits); the lower triangle is mirrored."""
    m = np.array(matrix, dtype=float)
    full = np.where(np.isnan(m), m.T, m)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(WIDTH * 0.8, WIDTH * 0.7))
        im = ax.imshow(full, cmap="viridis")
        ax.set_xticks(range(len(names)), names, rotation=45, ha="right")
        ax.set_yticks(range(len(names)), names)
        fig.colorbar(im, ax=ax, label="synergy (bits)")
        return _save(fig, path)


def feature_grid(names, values):
    """Arrange per-feature values on a (section, position) grid.

    Columns are LEx, LEy, the chord probes and TEx, TEy; names that do not
    follow the ``s<n>_<kind>`` pattern are ignored.
    """
    parsed = [(int(m.group(1)), m.group(2), v) for n, v in zip(names, values) if (m := _FEATURE.match(n))]
    if not parsed:
        return None, []
    n_sec = max(p[0] for p in parsed)
    n_pts = max([int(k[1:]) for _, k, _ in parsed if k.startswith("p")] or [0])
    cols = ["LEx", "LEy"] + [f"p{i}" for i in range(1, n_pts + 1)] + ["TEx", "TEy"]
    grid = np.full((n_sec, len(cols)), np.nan)
    for s, k, v in parsed:
        grid[s - 1, cols.index(k)] = v
    return grid, cols


def plot_feature_map(names, values, path, label: str = "CMI") -> Path:
    """Selected features on the section grid, hub at the bottom; unselected cells blank."""
    grid, cols = feature_grid(names, values)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        if grid is None:
            ax.text(0.5, 0.5, "no sectional features", ha="center", va="center", transform=ax.transAxes)
            ax.set_axis_off()
        else:
            im = ax.imshow(grid, origin="lower", cmap="magma_r", aspect="auto")
            ax.set_xticks(range(len(cols)), cols)
            ax.set_yticks(range(grid.shape[0]), [f"s{i + 1}" for i in range(grid.shape[0])])
            ax.set_xlabel("position (LE to TE)")
            ax.set_ylabel("section (hub to shroud)")
            fig.colorbar(im, ax=ax, label=label)
        return _save(fig, path)
