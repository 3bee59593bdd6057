"""Literal greedy implementations of the MI ranking criteria.

Entropies come from collections.Counter over tuples of symbols; every
information term is spelled out from entropies. Shares no code with the
package.
"""

from collections import Counter
from math import log2


def H(*cols):
    n = len(cols[0])
    counts = Counter(zip(*cols))
    return -sum(c / n * log2(c / n) for c in counts.values())


def I(a, b):
    """I(A;B) where a and b are tuples of columns."""
    return H(*a) + H(*b) - H(*a, *b)


def CI(a, b, c):
    """I(A;B|C) for tuples of columns."""
    return H(*a, *c) + H(*b, *c) - H(*a, *b, *c) - H(*c)


def score(crit, X, y, j, S):
    x = X[j]
    if not S or crit == "MIM":
        return I((x,), (y,))
    if crit == "JMI":
        return sum(I((x, X[k]), (y,)) for k in S)
    if crit == "MRMR":
        return I((x,), (y,)) - sum(I((x,), (X[k],)) for k in S) / len(S)
    if crit == "CMIM":
        return min(CI((x,), (y,), (X[k],)) for k in S)
    if crit == "DISR":
        return sum(I((x, X[k]), (y,)) / H(x, X[k], y) for k in S)
    if crit == "CIFE":
        return I((x,), (y,)) - sum(I((x,), (X[k],)) - CI((x,), (X[k],), (y,)) for k in S)
    if crit == "ICAP":
        return I((x,), (y,)) - sum(max(0.0, I((x,), (X[k],)) - CI((x,), (X[k],), (y,))) for k in S)
    if crit == "CONDRED":
        return I((x,), (y,)) + sum(CI((x,), (X[k],), (y,)) for k in S) - sum(I((x,), (X[k],)) for k in S)
    if crit == "CMI_BINNED":
        return CI((x,), (y,), tuple(X[k] for k in S))
    raise ValueError(crit)


def greedy(crit, X, y, size):
    """X: list of feature columns (lists of ints); returns (order, scores)."""
    S, scores = [], []
    rest = list(range(len(X)))
    for _ in range(min(size, len(X))):
        vals = [score(crit, X, y, j, S) for j in rest]
        best = max(range(len(rest)), key=lambda i: (vals[i], -i))
        S.append(rest.pop(best))
        scores.append(vals[best])
    return S, scores
