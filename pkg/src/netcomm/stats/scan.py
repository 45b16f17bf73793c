"""Signed scan statistic, its oracle version and the Bennett-type threshold."""

import math

import numpy as np

from ..exceptions import BudgetExceeded, DegenerateInput
from ..graph import edge_count
from ._search import max_quadratic_subset
from .outcome import TestOutcome
from .sgnq import eta_hat

DEFAULT_BUDGET = 10 ** 7
DEFAULT_CSTAR = 2.0


def centered_adjacency(g):
    """Dense ``A - eta eta'`` (diagonal ``-eta_i^2`` kept)."""
    eh = eta_hat(g)
    return g.to_dense() - np.outer(eh.eta, eh.eta)


def signed_scan_exhaustive(g, N, budget=DEFAULT_BUDGET, level=None, threshold=None):
    """``max_{|S| = N} 1_S' (A - eta eta') 1_S`` with the lexicographically first maximiser.

    Exact: branch and bound over all size-``N`` subsets. ``budget`` caps
    ``C(n, N)``; pass ``None`` to lift the cap. When ``threshold`` is given
    the outcome rejects on ``statistic > threshold``.
    """
    n = g.n
    if not 0 <= N <= n:
        raise ValueError(f"N must lie in [0, n={n}], got {N}")
    if N == 0:
        return TestOutcome("scan", 0.0, reject=False, level=level,
                           diagnostics={"subset": [], "N": 0})
    if budget is not None and math.comb(n, N) > budget:
        raise BudgetExceeded(f"C({n}, {N}) = {math.comb(n, N)} subsets exceeds budget {budget}")
    W = centered_adjacency(g)
    value, subset, visited = max_quadratic_subset(W, N)
    reject = False if threshold is None else bool(value > threshold)
    diag = {"subset": [int(v) for v in subset], "N": int(N), "nodes_visited": visited}
    if threshold is not None:
        diag["threshold"] = float(threshold)
    return TestOutcome("scan", float(value), reject=reject, level=level, diagnostics=diag)


def oracle_scan(g, S):
    """``1_S' (A - eta eta') 1_S`` at a known node set."""
    S = np.unique(np.asarray(list(S), dtype=np.int64))
    if S.size == 0:
        return 0.0
    eh = eta_hat(g)
    A = g.adjacency[S][:, S]
    e = eh.eta[S]
    return float(A.sum() - e.sum() ** 2)


def bennett_h(u):
    """``h(u) = (1 + u) log(1 + u) - u``."""
    if u < 0:
        raise ValueError("bennett_h is defined for u >= 0")
    return (1.0 + u) * math.log1p(u) - u


def bennett_h_inv(y):
    """Inverse of :func:`bennett_h` on ``[0, inf)`` by bisection to machine precision."""
    if y < 0:
        raise ValueError("bennett_h_inv is defined for y >= 0")
    if y == 0:
        return 0.0
    lo, hi = 0.0, 1.0
    while bennett_h(hi) < y:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if bennett_h(mid) < y:
            lo = mid
        else:
            hi = mid
    return hi if abs(bennett_h(hi) - y) <= abs(bennett_h(lo) - y) else lo


def bennett_threshold(n, N, gamma, c_star=DEFAULT_CSTAR):
    """``C* gamma N^2 h^{-1}(C* N log(n e / N) / (gamma N^2))``."""
    if not gamma > 0:
        raise DegenerateInput("edge density must be positive")
    if not 1 <= N <= n:
        raise ValueError(f"need 1 <= N <= n, got N={N}, n={n}")
    arg = c_star * N * math.log(n * math.e / N) / (gamma * N * N)
    return c_star * gamma * N * N * bennett_h_inv(arg)


def edge_density(g):
    """Edges over ``C(n, 2)``."""
    return edge_count(g) / math.comb(g.n, 2)


def scan_threshold(g, N, c_star=DEFAULT_CSTAR):
    if edge_count(g) == 0:
        raise DegenerateInput("graph has no edges")
    return bennett_threshold(g.n, N, edge_density(g), c_star)


def signed_scan_test(g, N, c_star=DEFAULT_CSTAR, budget=DEFAULT_BUDGET):
    """Exhaustive signed scan rejecting when the statistic exceeds the Bennett threshold."""
    tau = scan_threshold(g, N, c_star)
    out = signed_scan_exhaustive(g, N, budget=budget, threshold=tau)
    diag = dict(out.diagnostics, gamma_hat=edge_density(g), c_star=float(c_star))
    return TestOutcome("scan", out.statistic, reject=out.reject, diagnostics=diag)
