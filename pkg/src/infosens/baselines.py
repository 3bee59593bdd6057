"""Greedy MI-based feature ranking criteria on binned data.

Each criterion scores an unranked candidate X against the target Y and the
already ranked set S; the best-scoring candidate joins the ranking. All
criteria reduce to MIM (J = I(X;Y)) while S is empty.

    MIM        I(X;Y)
    JMI        sum_k I(X,S_k; Y)
    MRMR       I(X;Y) - mean_k I(X;S_k)
    CMIM       min_k I(X;Y|S_k)
    DISR       sum_k I(X,S_k; Y) / H(X,S_k,Y)
    CIFE       I(X;Y) - sum_k [I(X;S_k) - I(X;S_k|Y)]
    ICAP       I(X;Y) - sum_k max(0, I(X;S_k) - I(X;S_k|Y))
    CONDRED    I(X;Y) + sum_k I(X;S_k|Y) - sum_k I(X;S_k)
    CMI_BINNED I(X;Y|S) with S packed into one joint variable
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import BinnedDataset, pack_codes
from .estimators import discrete_cmi, discrete_mi, entropy

CRITERIA = ("MIM", "JMI", "MRMR", "CMIM", "DISR", "CIFE", "ICAP", "CONDRED", "CMI_BINNED")


@dataclass(frozen=True)
class RankingResult:
    criterion: str
    ordered: tuple[int, ...]
    scores: tuple[float, ...]


class _Cache:
    """Memoized pairwise information terms for one binned dataset."""

    def __init__(self, data: BinnedDataset):
        self.codes = data.codes
        self.y = data.target_codes
        self._mi_y = {}
        self._mi_xx = {}
        self._cmi_xx_y = {}
        self._cmi_y_x = {}
        self._joint = {}

    def col(self, j):
        return self.codes[:, j]

    def mi_y(self, j):
        if j not in self._mi_y:
            self._mi_y[j] = discrete_mi(self.col(j), self.y)
        return self._mi_y[j]

    def mi_xx(self, i, j):
        key = (min(i, j), max(i, j))
        if key not in self._mi_xx:
            self._mi_xx[key] = discrete_mi(self.col(key[0]), self.col(key[1]))
        return self._mi_xx[key]

    def cmi_xx_given_y(self, i, j):
        key = (min(i, j), max(i, j))
        if key not in self._cmi_xx_y:
            self._cmi_xx_y[key] = discrete_cmi(self.col(key[0]), self.col(key[1]), self.y)
        return self._cmi_xx_y[key]

    def cmi_y_given(self, j, k):
        """I(X_j; Y | X_k)."""
        if (j, k) not in self._cmi_y_x:
            self._cmi_y_x[(j, k)] = discrete_cmi(self.col(j), self.y, self.col(k))
        return self._cmi_y_x[(j, k)]

    def joint_terms(self, j, k):
        """(I(X_j,X_k; Y), H(X_j,X_k,Y))."""
        key = (min(j, k), max(j, k))
        if key not in self._joint:
            pair = pack_codes(self.col(key[0]), self.col(key[1]))
            self._joint[key] = (discrete_mi(pair, self.y), entropy(pair, self.y))
        return self._joint[key]


def _score(criterion: str, x: int, ranked: list[int], c: _Cache) -> float:
    if not ranked or criterion == "MIM":
        return c.mi_y(x)
    if criterion == "JMI":
        return sum(c.joint_terms(x, s)[0] for s in ranked)
    if criterion == "MRMR":
        return c.mi_y(x) - sum(c.mi_xx(x, s) for s in ranked) / len(ranked)
    if criterion == "CMIM":
        return min(c.cmi_y_given(x, s) for s in ranked)
    if criterion == "DISR":
        total = 0.0
        for s in ranked:
            mi, h = c.joint_terms(x, s)
            total += mi / h if h > 0 else 0.0
        return total
    if criterion == "CIFE":
        return c.mi_y(x) - sum(c.mi_xx(x, s) - c.cmi_xx_given_y(x, s) for s in ranked)
    if criterion == "ICAP":
        return c.mi_y(x) - sum(max(0.0, c.mi_xx(x, s) - c.cmi_xx_given_y(x, s)) for s in ranked)
    if criterion == "CONDRED":
        return (c.mi_y(x) + sum(c.cmi_xx_given_y(x, s) for s in ranked)
                - sum(c.mi_xx(x, s) for s in ranked))
    if criterion == "CMI_BINNED":
        return discrete_cmi(c.col(x), c.y, pack_codes(c.codes[:, ranked]))
    raise ValueError(f"unknown criterion {criterion!r}")


def rank(criterion: str, data: BinnedDataset, size: int) -> RankingResult:
    """Greedy forward ranking of ``min(size, D)`` features by ``criterion``.

    Ties go to the lowest feature index.
    """
    criterion = criterion.upper()
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {', '.join(CRITERIA)}")
    if size < 1:
        raise ValueError("size must be >= 1")
    cache = _Cache(data)
    ranked: list[int] = []
    scores: list[float] = []
    remaining = list(range(data.n_features))
    for _ in range(min(size, data.n_features)):
        vals = np.array([_score(criterion, x, ranked, cache) for x in remaining])
        best = int(np.argmax(vals))
        ranked.append(remaining.pop(best))
        scores.append(float(vals[best]))
    return RankingResult(criterion, tuple(ranked), tuple(scores))
