"""Greedy forward feature selection with a conditional-MI criterion.

Each iteration adds the feature with the largest I(X; Y | S) given the
already selected set S, provided the maximum-statistic permutation test
finds it significant; otherwise selection stops.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset
from .estimators import KsgConfig
from .stats import PermTestConfig, TestOutcome, candidate_statistics, outcome

log = logging.getLogger(__name__)

NO_SIGNIFICANT = "no-significant-candidate"
EXHAUSTED = "exhausted-candidates"
MAX_SIZE = "max-set-size"

DEFAULT_MAX_SET_SIZE = 10


@dataclass(frozen=True)
class SelectionStep:
    """Record of one iteration: the winning candidate and its test outcome."""

    candidate: int
    conditioning: tuple[int, ...]
    test: TestOutcome
    candidate_cmis: dict = field(repr=False)


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]
    names: tuple[str, ...]
    cmi_values: tuple[float, ...]
    p_values: tuple[float, ...]
    terminated: str
    initial: tuple[int, ...] = ()
    steps: tuple[SelectionStep, ...] = field(default=(), repr=False)

    @property
    def feature_set(self) -> tuple[int, ...]:
        """Initial (warm-start) features followed by the selected ones."""
        return self.initial + self.selected


def step_seed(test: PermTestConfig, step: int) -> PermTestConfig:
    """Permutation config of iteration ``step`` (surrogate seeds never repeat across steps)."""
    return replace(test, seed=test.seed + step * test.n_perm)


def select_features(data: Dataset, ksg: KsgConfig = KsgConfig(), test: PermTestConfig = PermTestConfig(),
                    max_set_size: int = DEFAULT_MAX_SET_SIZE, initial=()) -> SelectionResult:
    """Forward selection of the features most informative about ``data.target``.

    Parameters
    ----------
    data : Dataset
    ksg : KsgConfig
        Estimator settings for I(X; Y | S).
    test : PermTestConfig
        Permutation test settings; iteration ``i`` uses surrogate seeds
        ``test.seed + i * n_perm + r``.
    max_set_size : int
        Upper bound on the size of the final set (including ``initial``).
    initial : sequence of int
        Optional warm-start set; these features are conditioned on from the
        first iteration but are not tested themselves.

    Returns
    -------
    SelectionResult
    """
    if max_set_size < 1:
        raise ValueError("max_set_size must be >= 1")
    if data.n_features < 1:
        raise ValueError("empty feature set")
    initial = tuple(int(i) for i in initial)
    if len(set(initial)) != len(initial) or any(not 0 <= i < data.n_features for i in initial):
        raise ValueError(f"invalid initial set {initial}")

    y = data.target
    selected: list[int] = []
    remaining = [j for j in range(data.n_features) if j not in initial]
    cmis, pvals, steps = [], [], []
    terminated = EXHAUSTED
    step = 0
    while True:
        current = list(initial) + selected
        if not remaining:
            terminated = EXHAUSTED
            break
        if len(current) >= max_set_size:
            terminated = MAX_SIZE
            break
        cond = data.values[:, current] if current else None
        cfg = step_seed(test, step)
        stats, table = candidate_statistics([data.values[:, j] for j in remaining], y, cond, ksg, cfg)
        win = int(np.argmax(stats))  # first maximum = lowest feature index
        result = outcome(stats[win], table.max(axis=0), cfg)
        feature = remaining[win]
        steps.append(SelectionStep(feature, tuple(current), result,
                                   {remaining[c]: float(v) for c, v in enumerate(stats)}))
        log.info("step %d: %s cmi=%.4f p=%.4f", step, data.names[feature], result.statistic, result.p_value)
        if not result.significant:
            terminated = NO_SIGNIFICANT
            break
        selected.append(feature)
        remaining.remove(feature)
        cmis.append(result.statistic)
        pvals.append(result.p_value)
        step += 1

    return SelectionResult(tuple(selected), tuple(data.names[j] for j in selected), tuple(cmis),
                           tuple(pvals), terminated, initial, tuple(steps))
