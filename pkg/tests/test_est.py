import itertools

import numpy as np
import pytest

from netcomm import Graph, InvalidParameters, NoFeasiblePair
from netcomm.stats import choose_ve, est_statistic, est_test

from _graphs import complete, erdos_renyi, path


def brute_est(g, v):
    A = g.to_dense()
    k = min(v, g.n)
    return max(int(A[np.ix_(S, S)].sum()) // 2 for S in itertools.combinations(range(g.n), k))


def test_p4():
    assert est_statistic(path(4), 3) == 2
    out = est_test(path(4), 3, 3)
    assert out.statistic == 2 and out.reject is False


def test_triangle_rejects():
    assert est_test(complete(3), 3, 3).reject


def test_matches_brute_force(rng):
    for _ in range(25):
        g = erdos_renyi(int(rng.integers(3, 12)), float(rng.uniform(0.1, 0.7)), rng)
        v = int(rng.integers(2, 6))
        assert est_statistic(g, v) == brute_est(g, v)


def test_small_inputs():
    assert est_statistic(Graph(5), 3) == 0
    assert est_statistic(complete(3), 5) == 3
    assert est_statistic(complete(4), 1) == 0


@pytest.mark.parametrize("v", [0, 9, 2.5, True])
def test_bad_v(v):
    with pytest.raises(InvalidParameters):
        est_statistic(complete(4), v)


def test_bad_e():
    with pytest.raises(InvalidParameters):
        est_test(complete(4), 3, 0)


def test_choose_ve():
    assert choose_ve(0.3, 0.8, 0.5) == (5, 7)
    assert choose_ve(0.3, 0.8, 0.5, require_balanced=False) == (2, 3)
    v, e = choose_ve(0.1, 0.6, 0.0)
    assert 0.1 < v / e < 0.6 and v - 1 <= e <= v * (v - 1) // 2


def test_choose_ve_infeasible():
    with pytest.raises(NoFeasiblePair):
        choose_ve(0.5, 0.4, 0.0)
    with pytest.raises(NoFeasiblePair):
        choose_ve(0.59, 0.6, 0.0, v_cap=3)
    with pytest.raises(InvalidParameters):
        choose_ve(0.1, 0.5, 1.0)
