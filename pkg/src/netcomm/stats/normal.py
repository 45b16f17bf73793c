"""Standard normal CDF, survival function and quantile.

Thin wrappers over :class:`statistics.NormalDist`, whose ``inv_cdf`` is
Wichura's AS241 rational approximation (relative error ~1e-16), and over
``math.erfc`` for the tails so that ``normal_sf(x)`` stays accurate for large x.
"""

import math
from statistics import NormalDist

_STD = NormalDist()
_SQRT2 = math.sqrt(2.0)


def normal_cdf(x):
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_sf(x):
    """``P(Z >= x)``."""
    return 0.5 * math.erfc(x / _SQRT2)


def normal_quantile(p):
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {p!r}")
    return _STD.inv_cdf(p)


def z_upper(kappa):
    """``z`` with ``P(Z >= z) = kappa``."""
    return -normal_quantile(kappa)
