"""Planted statistical benchmark with known relevant, synergistic and decoy features.

    X1 ~ N(0, 1)
    X2, X3 ~ uniform on {-1, +1}
    X4..X10 ~ N(0, 1), independent decoys
    Y = X1 + 0.3 X2 + X2 X3 + 0.05 eps,  eps ~ N(0, 1)

X3 alone carries no information about Y (E[X3 Y] = 0 and the law of Y is
symmetric in X3); given X2 it determines the sign of the product term.
"""

from __future__ import annotations

import numpy as np

from ..data import Dataset

N_FEATURES = 10
RELEVANT = (0, 1, 2)
NOISE_SD = 0.05


def planted_benchmark(n_samples: int, seed: int) -> Dataset:
    if n_samples < 100:
        raise ValueError("n_samples must be >= 100")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_samples, N_FEATURES))
    x[:, 1] = rng.choice([-1.0, 1.0], n_samples)
    x[:, 2] = rng.choice([-1.0, 1.0], n_samples)
    y = x[:, 0] + 0.3 * x[:, 1] + x[:, 1] * x[:, 2] + NOISE_SD * rng.standard_normal(n_samples)
    names = tuple(f"X{i + 1}" for i in range(N_FEATURES))
    return Dataset(x, names, y, {"source": "planted_benchmark", "seed": seed})
