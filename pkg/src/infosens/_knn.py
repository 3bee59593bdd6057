"""Exact max-norm neighbour search kernels used by the KSG estimators.

Every kernel returns exactly the counts of the O(N^2) definition: distances
are computed as ``max_c |a_ic - a_jc|`` in float64 and compared with strict
inequality, so the sorted-projection scans below only prune candidates that
provably cannot qualify.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _sorted_copy(pts):
    n, d = pts.shape
    order = np.argsort(pts[:, 0], kind="mergesort")
    sp = np.empty((n, d))
    for p in range(n):
        for c in range(d):
            sp[p, c] = pts[order[p], c]
    return order, sp


@njit(cache=True)
def _insert(best, dist):
    k = best.shape[0]
    m = k - 1
    while m > 0 and best[m - 1] > dist:
        best[m] = best[m - 1]
        m -= 1
    best[m] = dist


@njit(cache=True)
def knn_radius(pts, k):
    """Distance from each point to its k-th nearest other point (max-norm)."""
    n, d = pts.shape
    order, sp = _sorted_copy(pts)
    eps = np.empty(n)
    best = np.empty(k)
    for p in range(n):
        for m in range(k):
            best[m] = np.inf
        lo = p - 1
        hi = p + 1
        v = sp[p, 0]
        while True:
            dl = v - sp[lo, 0] if lo >= 0 else np.inf
            dh = sp[hi, 0] - v if hi < n else np.inf
            if dl <= dh:
                if dl >= best[k - 1]:
                    break
                q = lo
                lo -= 1
            else:
                if dh >= best[k - 1]:
                    break
                q = hi
                hi += 1
            dist = 0.0
            for c in range(d):
                t = abs(sp[p, c] - sp[q, c])
                if t > dist:
                    dist = t
            if dist < best[k - 1]:
                _insert(best, dist)
        eps[order[p]] = best[k - 1]
    return eps


@njit(cache=True)
def count_within(pts, eps):
    """Number of other points strictly closer than ``eps[i]`` to point i (max-norm)."""
    n, d = pts.shape
    order, sp = _sorted_copy(pts)
    se = np.empty(n)
    for p in range(n):
        se[p] = eps[order[p]]
    out = np.empty(n, np.int64)
    for p in range(n):
        e = se[p]
        v = sp[p, 0]
        cnt = 0
        q = p - 1
        while q >= 0 and v - sp[q, 0] < e:
            ok = True
            for c in range(1, d):
                if abs(sp[p, c] - sp[q, c]) >= e:
                    ok = False
                    break
            if ok:
                cnt += 1
            q -= 1
        q = p + 1
        while q < n and sp[q, 0] - v < e:
            ok = True
            for c in range(1, d):
                if abs(sp[p, c] - sp[q, c]) >= e:
                    ok = False
                    break
            if ok:
                cnt += 1
            q += 1
        out[order[p]] = cnt
    return out


@njit(cache=True)
def distance_matrix(pts):
    n, d = pts.shape
    out = np.empty((n, n))
    for i in range(n):
        out[i, i] = 0.0
        for j in range(i + 1, n):
            dist = 0.0
            for c in range(d):
                t = abs(pts[i, c] - pts[j, c])
                if t > dist:
                    dist = t
            out[i, j] = dist
            out[j, i] = dist
    return out


@njit(cache=True)
def _window_lo(ys, p, e):
    # first q <= p with ys[p] - ys[q] < e (predicate is monotone in q)
    lo, hi = 0, p
    v = ys[p]
    while lo < hi:
        mid = (lo + hi) // 2
        if v - ys[mid] < e:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True)
def _window_hi(ys, p, e):
    # one past the last q >= p with ys[q] - ys[p] < e
    n = ys.shape[0]
    lo, hi = p + 1, n
    v = ys[p]
    while lo < hi:
        mid = (lo + hi) // 2
        if ys[mid] - v < e:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def knn_walk(y, vals, idx, raw, k):
    """k-th neighbour distance in the space ``max(raw[i, j], |y_i - y_j|)``.

    ``vals``/``idx`` hold, per row, the smallest entries of ``raw`` in
    ascending order. Rows are walked until the fixed-part distance alone
    exceeds the current k-th best; exhausted prefixes fall back to a full
    row scan.
    """
    n = y.shape[0]
    m = vals.shape[1]
    eps = np.empty(n)
    best = np.empty(k)
    for i in range(n):
        for t in range(k):
            best[t] = np.inf
        yi = y[i]
        done = False
        for t in range(m):
            b = vals[i, t]
            if b >= best[k - 1]:
                done = True
                break
            j = idx[i, t]
            if j == i:
                continue
            dy = abs(yi - y[j])
            d = b if b > dy else dy
            if d < best[k - 1]:
                _insert(best, d)
        if not done and m < n:
            for t in range(k):
                best[t] = np.inf
            row = raw[i]
            for j in range(n):
                if j == i:
                    continue
                dy = abs(yi - y[j])
                b = row[j]
                d = b if b > dy else dy
                if d < best[k - 1]:
                    _insert(best, d)
        eps[i] = best[k - 1]
    return eps


@njit(cache=True)
def count_prefix(vals, idx, raw, eps):
    """Strict counts ``#{j != i : raw[i, j] < eps[i]}`` using the sorted prefixes.

    Each row's prefix must contain the row's own index (see ``estimators._SortedRows``).
    """
    n = vals.shape[0]
    m = vals.shape[1]
    out = np.empty(n, np.int64)
    for i in range(n):
        e = eps[i]
        if m == n or e <= vals[i, m - 1]:
            c = np.searchsorted(vals[i], e)
            if e > 0.0:
                c -= 1
        else:
            c = 0
            row = raw[i]
            for j in range(n):
                if j != i and row[j] < e:
                    c += 1
        out[i] = c
    return out


@njit(cache=True)
def count_joint_y(y, vals, idx, raw, eps, n_fixed):
    """Strict counts in ``max(raw[i, j], |y_i - y_j|)`` (``raw`` the conditioning space).

    For each point the cheaper of two exact enumerations is used: the sorted
    prefix of the fixed space (``n_fixed[i]`` entries qualify there) or the
    window of the target sorted by value.
    """
    n = y.shape[0]
    m = vals.shape[1]
    order = np.argsort(y, kind="mergesort")
    ys = y[order]
    out = np.empty(n, np.int64)
    for p in range(n):
        i = order[p]
        e = eps[i]
        lo = _window_lo(ys, p, e)
        hi = _window_hi(ys, p, e)
        c = 0
        if (m == n or e <= vals[i, m - 1]) and n_fixed[i] < hi - lo:
            yi = y[i]
            for t in range(m):
                if vals[i, t] >= e:
                    break
                j = idx[i, t]
                if j != i and abs(yi - y[j]) < e:
                    c += 1
        else:
            row = raw[i]
            for q in range(lo, hi):
                if q != p and row[order[q]] < e:
                    c += 1
        out[i] = c
    return out


@njit(cache=True)
def count_y_only(y, eps):
    """Strict counts ``#{j != i : |y_i - y_j| < eps[i]}`` for 1-D ``y``."""
    n = y.shape[0]
    order = np.argsort(y, kind="mergesort")
    ys = y[order]
    out = np.empty(n, np.int64)
    for p in range(n):
        e = eps[order[p]]
        out[order[p]] = _window_hi(ys, p, e) - _window_lo(ys, p, e) - 1 if e > 0.0 else 0
    return out
