"""Degree-based chi-square test against an Erdos-Renyi null."""

import math

import numpy as np

from ..exceptions import DegenerateInput
from ..graph import degrees, edge_count
from .normal import normal_sf, z_upper
from .outcome import TestOutcome


def chi2_statistic(g, level=0.05, two_sided=False):
    """``X = sum_i (y_i - n alpha)^2 / ((n - 1) alpha (1 - alpha))``, ``alpha = 1'A1 / (n(n-1))``.

    Standardized as ``(X - n) / sqrt(2n)``. One-sided by default (reject when
    the standardized value exceeds ``z_level``); ``two_sided=True`` compares
    its absolute value with ``z_{level/2}``.
    """
    n = g.n
    m = edge_count(g)
    if n < 2 or m == 0 or 2 * m == n * (n - 1):
        raise DegenerateInput("chi2 needs an edge density strictly between 0 and 1")
    alpha = 2.0 * m / (n * (n - 1))
    y = degrees(g).astype(float)
    X = float(np.sum((y - n * alpha) ** 2) / ((n - 1) * alpha * (1.0 - alpha)))
    z = (X - n) / math.sqrt(2.0 * n)
    if two_sided:
        p = min(1.0, 2.0 * normal_sf(abs(z)))
        reject = abs(z) > z_upper(level / 2.0)
    else:
        p = normal_sf(z)
        reject = z > z_upper(level)
    return TestOutcome(
        test_name="chi2",
        statistic=X,
        standardized=z,
        p_value=p,
        reject=bool(reject),
        level=level,
        diagnostics={"alpha_hat": alpha, "two_sided": bool(two_sided)},
    )
