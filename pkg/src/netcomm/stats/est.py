"""Economic scan test: densest induced subgraph on at most ``v`` nodes."""

import math
from fractions import Fraction

import numpy as np

from ..exceptions import InvalidParameters, NoFeasiblePair
from ._search import max_quadratic_subset
from .outcome import TestOutcome

MAX_V = 8


def est_statistic(g, v):
    """Largest number of (unordered) edges induced by at most ``v`` nodes."""
    if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 1 <= v <= MAX_V:
        raise InvalidParameters(f"v must be an integer in [1, {MAX_V}], got {v!r}")
    k = min(int(v), g.n)
    if not g.edges or k < 2:
        return 0
    # edges never decrease when a node is added, so |S| = k suffices
    value, _, _ = max_quadratic_subset(g.to_dense(), k, tol=0.5)
    return int(round(value)) // 2


def est_test(g, v, e):
    if isinstance(e, bool) or not isinstance(e, (int, np.integer)) or e < 1:
        raise InvalidParameters(f"e must be a positive integer, got {e!r}")
    stat = est_statistic(g, v)
    return TestOutcome("est", stat, reject=stat >= e, diagnostics={"v": int(v), "e": int(e)})


def choose_ve(omega, delta, beta, v_cap=MAX_V, require_balanced=True):
    """Smallest coprime ``(v, e)`` with ``omega / (1 - beta) < v / e < delta``.

    Pairs are ranked by ``v`` then ``e``. With ``require_balanced`` (default)
    only pairs with ``v - 1 <= e <= C(v, 2)`` qualify: those are exactly the
    sizes for which a balanced graph on ``v`` nodes and ``e`` edges exists,
    and with ``e > C(v, 2)`` the test could never reject.
    """
    if not 0 <= beta < 1:
        raise InvalidParameters("beta must lie in [0, 1)")
    # decimal reading of the inputs, so 0.8 means 4/5 exactly
    lo = _exact(omega) / (1 - _exact(beta))
    hi = _exact(delta)
    if lo >= hi or hi <= 0:
        raise NoFeasiblePair(f"empty interval ({float(lo)}, {float(hi)})")
    for v in range(1, v_cap + 1):
        # v / e < hi  <=>  e > v / hi
        e = math.floor(Fraction(v) / hi) + 1
        while lo == 0 or Fraction(v, e) > lo:
            if math.gcd(v, e) == 1 and (
                    not require_balanced or v - 1 <= e <= math.comb(v, 2)):
                return v, e
            if require_balanced and e >= math.comb(v, 2):
                break
            if not require_balanced and math.gcd(v, e) == 1:
                break
            e += 1
    raise NoFeasiblePair(
        f"no admissible (v, e) with v <= {v_cap} in ({float(lo)}, {float(hi)})")


def _exact(x):
    return Fraction(repr(float(x)))
