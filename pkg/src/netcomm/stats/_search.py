"""Exact maximisation of ``1_S' W 1_S`` over subsets of fixed size.

Depth-first branch and bound over index-increasing subsets. Subsets are
visited in lexicographic order and an incumbent is replaced only on strict
improvement (beyond ``tol``), so the returned maximiser is the
lexicographically smallest one. The bound for completing a partial set ``S``
with ``r`` more nodes is

    f(S) + top_r over candidates j of ( gain_j(S) + rowtop_j[r - 1] )

where ``gain_j(S) = W_jj + 2 sum_{i in S} W_ij`` and ``rowtop_j[m]`` is the
sum of the ``m`` largest off-diagonal entries in row ``j``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _top_sum(vals, lo, hi, r, buf):
    # sum of the r largest entries of vals[lo:hi]; buf holds a descending list
    cnt = 0
    for j in range(lo, hi):
        v = vals[j]
        if cnt < r:
            pos = cnt
            cnt += 1
        elif v > buf[r - 1]:
            pos = r - 1
        else:
            continue
        while pos > 0 and buf[pos - 1] < v:
            buf[pos] = buf[pos - 1]
            pos -= 1
        buf[pos] = v
    s = 0.0
    for t in range(cnt):
        s += buf[t]
    return s


@njit(cache=True)
def _bnb(W, k, rowtop, seed_value, tol):
    n = W.shape[0]
    gains = np.empty((k + 1, n))
    for t in range(n):
        gains[0, t] = W[t, t]
    cur = np.zeros(k + 1)
    sel = np.empty(k, dtype=np.int64)
    pos = np.zeros(k + 1, dtype=np.int64)
    best_set = np.full(k, -1, dtype=np.int64)
    best = -np.inf
    have_best = False
    bound_vals = np.empty(n)
    buf = np.empty(k + 1)
    visited = 0

    depth = 0
    while depth >= 0:
        r = k - depth
        j = pos[depth]
        if j > n - r:
            depth -= 1
            continue
        # completions of sel[:depth] drawing r nodes from j..n-1
        for t in range(j, n):
            bound_vals[t] = gains[depth, t] + rowtop[t, r - 1]
        ub = cur[depth] + _top_sum(bound_vals, j, n, r, buf)
        if (have_best and ub <= best + tol) or (not have_best and ub < seed_value - tol):
            depth -= 1
            continue
        visited += 1
        if r == 1:
            base = cur[depth]
            for t in range(j, n):
                v = base + gains[depth, t]
                if (have_best and v > best + tol) or (not have_best and v >= seed_value - tol):
                    best = v
                    have_best = True
                    for s in range(depth):
                        best_set[s] = sel[s]
                    best_set[depth] = t
            depth -= 1
            continue
        sel[depth] = j
        pos[depth] = j + 1
        cur[depth + 1] = cur[depth] + gains[depth, j]
        for t in range(n):
            gains[depth + 1, t] = gains[depth, t] + 2.0 * W[j, t]
        depth += 1
        pos[depth] = j + 1
    return best, best_set, visited


def row_top_sums(W, k):
    """``out[j, m]`` = sum of the ``m + 1`` largest off-diagonal entries of row ``j``."""
    n = W.shape[0]
    off = W.astype(float, copy=True)
    np.fill_diagonal(off, -np.inf)
    srt = -np.sort(-off, axis=1)[:, : max(k, 1)]
    srt[~np.isfinite(srt)] = 0.0
    out = np.zeros((n, max(k, 1)))
    if k > 1:
        out[:, 1:] = np.cumsum(srt[:, : k - 1], axis=1)
    return out


def greedy_value(W, k):
    """Value of a greedy-plus-swap local optimum (a lower bound on the maximum)."""
    n = W.shape[0]
    diag = np.diag(W).copy()
    chosen = []
    gain = diag.copy()
    mask = np.zeros(n, dtype=bool)
    for _ in range(k):
        g = np.where(mask, -np.inf, gain)
        j = int(np.argmax(g))
        chosen.append(j)
        mask[j] = True
        gain += 2.0 * W[j]
    value = _value(W, chosen)
    improved = True
    while improved:
        improved = False
        for pos in range(k):
            rest = chosen[:pos] + chosen[pos + 1:]
            contrib = diag + 2.0 * W[:, rest].sum(axis=1)
            contrib[np.array(rest, dtype=int)] = -np.inf
            j = int(np.argmax(contrib))
            cand = rest + [j]
            v = _value(W, cand)
            if v > value + 1e-12:
                chosen, value, improved = sorted(cand), v, True
                break
    return value


def _value(W, S):
    S = np.asarray(S, dtype=int)
    return float(W[np.ix_(S, S)].sum())


def max_quadratic_subset(W, k, tol=None):
    """Return ``(value, subset, nodes_visited)`` maximising ``1_S' W 1_S`` over ``|S| = k``.

    ``W`` must be symmetric. Ties within ``tol`` resolve to the
    lexicographically smallest subset.
    """
    W = np.ascontiguousarray(W, dtype=np.float64)
    n = W.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f"subset size {k} outside [0, {n}]")
    if k == 0:
        return 0.0, np.empty(0, dtype=np.int64), 0
    if tol is None:
        tol = 1e-9 * (1.0 + float(np.abs(W).max()) * k * k)
    seed_value = greedy_value(W, k)
    rowtop = row_top_sums(W, k)
    best, best_set, visited = _bnb(W, k, rowtop, seed_value, tol)
    best_set = best_set.copy()
    return _value(W, best_set), best_set, int(visited)
