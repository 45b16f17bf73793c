"""Estimator-style wrappers around the global tests.

Each class follows the scikit-learn conventions: constructor arguments are
stored verbatim (so ``get_params``/``set_params``/``clone`` work), ``fit``
takes one graph (a :class:`Graph`, an adjacency matrix, or a networkx-like
object) and stores the outcome in trailing-underscore attributes.
``predict`` returns the reject decision and ``decision_function`` the
quantity compared against the threshold.
"""

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_graph, check_level, check_positive_int
from .stats import chi2_statistic, est_test, sgnq_psi, signed_scan_test
from .stats.scan import DEFAULT_BUDGET, DEFAULT_CSTAR


class _GraphTest(BaseEstimator):

    def _run(self, g):
        raise NotImplementedError

    def fit(self, X, y=None):
        out = self._run(check_graph(X))
        self.outcome_ = out
        self.statistic_ = out.statistic
        self.standardized_ = out.standardized
        self.p_value_ = out.p_value
        self.reject_ = out.reject
        return self

    def decision_function(self, X=None):
        """Standardized statistic when defined, otherwise the raw statistic."""
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "outcome_")
        s = self.outcome_.standardized
        return self.outcome_.statistic if s is None else s

    def predict(self, X=None):
        if X is not None:
            self.fit(X)
        check_is_fitted(self, "outcome_")
        return bool(self.reject_)


class SgnQTest(_GraphTest):
    """Signed-quadrilateral test with a one-sided normal threshold."""

    def __init__(self, level=0.05):
        self.level = level

    def _run(self, g):
        return sgnq_psi(g, level=check_level(self.level))


class Chi2Test(_GraphTest):
    """Degree-dispersion chi-square test."""

    def __init__(self, level=0.05, two_sided=False):
        self.level = level
        self.two_sided = two_sided

    def _run(self, g):
        return chi2_statistic(g, level=check_level(self.level), two_sided=bool(self.two_sided))


class SignedScanTest(_GraphTest):
    """Exhaustive signed scan over node sets of size ``N`` with the Bennett threshold."""

    def __init__(self, N=1, c_star=DEFAULT_CSTAR, budget=DEFAULT_BUDGET):
        self.N = N
        self.c_star = c_star
        self.budget = budget

    def _run(self, g):
        N = check_positive_int(self.N, "N")
        return signed_scan_test(g, N, c_star=self.c_star, budget=self.budget)

    @property
    def subset_(self):
        check_is_fitted(self, "outcome_")
        return self.outcome_.diagnostics["subset"]


class EconomicScanTest(_GraphTest):
    """Rejects when some ``v`` nodes induce at least ``e`` edges."""

    def __init__(self, v=3, e=3):
        self.v = v
        self.e = e

    def _run(self, g):
        return est_test(g, self.v, self.e)
