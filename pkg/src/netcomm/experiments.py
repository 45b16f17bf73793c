"""Monte-Carlo power estimation, empirical calibration, power sweeps, phase diagram.

Every random quantity is drawn from a :func:`netcomm.rng.stream` keyed by the
experiment seed and the replicate's position (grid index, replicate index),
so tables are pure functions of their arguments and do not depend on the
number of worker threads.
"""

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from . import __version__
from .exceptions import DegenerateInput, InfeasibleAlternative, InvalidParameters, TooManyDegenerate
from .model import (
    DcbmParams,
    TwoBlockSpec,
    a_max_for_alpha,
    a_max_for_c,
    matched_null_alpha,
    pareto_theta,
    sample,
    two_block_from_alpha,
)
from .stats import chi2_statistic, oracle_scan, sgnq_psi, signed_scan_exhaustive
from .stats.normal import normal_cdf

TABLE_COLUMNS = [
    "a", "b", "c", "alpha",
    "power_sgnq", "se_sgnq", "power_chi2", "se_chi2", "power_scan", "se_scan",
    "a_stat_marker", "a_comp_marker", "status",
]


# -- replicate plumbing ------------------------------------------------------------

def _map_reps(fn, reps, threads=1):
    if threads is None or threads <= 1 or reps <= 1:
        return [fn(r) for r in range(reps)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(reps)))


def _as_reject(result):
    return bool(result.reject) if hasattr(result, "reject") else bool(result)


def _binomial_se(p, m):
    return math.sqrt(p * (1.0 - p) / m) if m > 0 else float("nan")


def estimate_power(alt_sampler, test, kappa, reps, seed, threads=1):
    """Fraction of ``reps`` sampled graphs on which ``test`` rejects, with its binomial s.e.

    ``alt_sampler(seed, r)`` returns a graph; ``test(graph)`` returns a bool
    or a :class:`TestOutcome`. ``kappa`` is the level the test was built for
    and is only validated here. A replicate whose test raises
    :class:`DegenerateInput` counts as a non-rejection; if more than half the
    replicates are degenerate the estimate is abandoned.
    """
    if not 0.0 < kappa < 1.0:
        raise InvalidParameters("kappa must lie in (0, 1)")
    if reps < 1:
        raise InvalidParameters("reps must be >= 1")

    def one(r):
        try:
            return _as_reject(test(alt_sampler(seed, r)))
        except DegenerateInput:
            return None

    results = _map_reps(one, reps, threads)
    n_deg = sum(x is None for x in results)
    if n_deg > reps / 2:
        raise TooManyDegenerate(
            f"{n_deg} of {reps} replicates were degenerate", n_degenerate=n_deg, reps=reps)
    power = sum(bool(x) for x in results) / reps
    return power, _binomial_se(power, reps)


def empirical_quantile_index(kappa, m):
    """1-based order statistic ``ceil((1 - kappa) m)`` (at least 1)."""
    k = math.ceil(round((1.0 - kappa) * m, 9))
    return min(max(k, 1), m)


def calibrate_empirical_threshold(null_sampler, statistic, kappa, m_cal, seed, threads=1):
    """Upper ``kappa`` empirical quantile of ``statistic`` over ``m_cal`` null draws.

    Uses the order statistic of rank ``ceil((1 - kappa) m_cal)``, the
    conservative choice among empirical quantile conventions.
    """
    if m_cal < 1:
        raise InvalidParameters("m_cal must be >= 1")
    values = np.sort(np.asarray(
        _map_reps(lambda r: float(statistic(null_sampler(seed, r))), m_cal, threads)))
    return float(values[empirical_quantile_index(kappa, m_cal) - 1])


# -- thresholds ----------------------------------------------------------------------

def stat_marker_c(N, c):
    """Root in ``a`` of ``sqrt(N) (a - c) / (2 sqrt(c (1 - c))) = 1``."""
    return c + 2.0 * math.sqrt(c * (1.0 - c) / N)


def comp_marker_c(n, N, c):
    """Root in ``a`` of ``N (a - c) / sqrt(n c) = 1``."""
    return c + math.sqrt(n * c) / N


def _stat_margin(N, a, c):
    return 0.5 * math.sqrt(N) * (a - c) / math.sqrt(c * (1.0 - c)) - 1.0


def _comp_margin(n, N, a, c):
    return N * (a - c) / math.sqrt(n * c) - 1.0


def threshold_markers(n, N, c=None, alpha=None, grid=None):
    """``(a_stat, a_comp)``: where the statistical and computational signal ratios reach 1.

    Give exactly one of ``c`` (fixed-``c`` sweeps) or ``alpha`` (fixed-``alpha``
    sweeps, where ``c`` moves with ``a``). Without ``grid`` the exact roots on
    the feasible range are returned; with ``grid`` the first grid value at
    which each inequality holds strictly. Markers that never trigger are
    ``None``.
    """
    if (c is None) == (alpha is None):
        raise InvalidParameters("give exactly one of c or alpha")
    if c is not None:
        lo, hi = c, feasible_a_max(n, N, c=c)

        def c_of(a):
            return c
    else:
        lo, hi = alpha, feasible_a_max(n, N, alpha=alpha)

        def c_of(a):
            return two_block_from_alpha(n, N, min(a, hi), alpha)[1]

    def stat(a):
        return _stat_margin(N, a, c_of(a))

    def comp(a):
        return _comp_margin(n, N, a, c_of(a))

    if grid is not None:
        def first(f):
            for a in grid:
                try:
                    if f(a) > 0:
                        return float(a)
                except InfeasibleAlternative:
                    continue
            return None
        return first(stat), first(comp)

    if c is not None:
        roots = stat_marker_c(N, c), comp_marker_c(n, N, c)
        return tuple(r if r <= hi else None for r in roots)

    def root(f):
        if f(hi) < 0:
            return None
        if f(lo) >= 0:
            return float(lo)
        return float(brentq(f, lo, hi, xtol=1e-14, rtol=1e-14))
    return root(stat), root(comp)


def feasible_a_max(n, N, c=None, alpha=None):
    """Largest ``a`` keeping ``b >= 0``, capped at 1 so ``a`` stays a probability."""
    top = a_max_for_c(n, N, c) if c is not None else a_max_for_alpha(n, N, alpha)
    return min(top, 1.0)


def a_grid(lo, hi, points=20):
    return [float(x) for x in np.linspace(lo, hi, points)]


# -- samplers ------------------------------------------------------------------------

def erdos_renyi_sampler(n, alpha):
    Om = np.full((n, n), alpha)

    def draw(seed, *path):
        return sample(Om, seed, *path)
    return draw


def _ensure_nonempty(g):
    if not g.edges:
        raise DegenerateInput("sampled graph has no edges")
    return g


# -- power sweeps ----------------------------------------------------------------------

@dataclass
class PowerCurveSpec:
    """Configuration for a power-curve sweep.

    ``mode`` is ``"fixed-alpha"`` (SgnQ vs oracle scan, null Erdos-Renyi(alpha))
    or ``"fixed-c"`` with ``degree`` ``"matched"``/``"unmatched"`` (SgnQ vs chi2).
    """

    n: int
    N: int
    level: float = 0.05
    a_grid: list = None
    reps: int = 200
    m_cal: int = 75
    tests: tuple = ("sgnq", "scan")
    mode: str = "fixed-alpha"
    alpha: float = None
    c: float = None
    degree: str = "matched"
    seed: int = 0
    threads: int = 1

    def to_dict(self):
        d = asdict(self)
        d["tests"] = list(self.tests)
        return d


def _empty_row(a):
    row = dict.fromkeys(TABLE_COLUMNS)
    row["a"] = a
    row["status"] = "ok"
    return row


def scan_vs_sgnq_experiment(n, N, alpha, a_grid_values=None, m_cal=75, m_pow=200,
                            kappa=0.05, seed=0, threads=1, points=20):
    """SgnQ against the oracle scan with an empirically calibrated threshold.

    The scan threshold is the empirical upper-``kappa`` quantile of the
    exhaustive (non-oracle) scan over ``m_cal`` Erdos-Renyi(``alpha``) draws.
    Each alternative replicate rejects for the scan when the quadratic form
    at the true planted set exceeds that threshold, so ``power_scan`` is a
    lower bound on the power of the full scan. SgnQ uses its normal
    threshold. Both tests see the same replicates.
    """
    null = erdos_renyi_sampler(n, alpha)
    tau = calibrate_empirical_threshold(
        lambda s, r: _ensure_nonempty(null(s, 0, r)),
        lambda g: signed_scan_exhaustive(g, N, budget=None).statistic,
        kappa, m_cal, seed, threads)
    grid = (a_grid_values if a_grid_values is not None
            else a_grid(alpha, feasible_a_max(n, N, alpha=alpha), points))
    a_stat, a_comp = threshold_markers(n, N, alpha=alpha)
    planted = np.arange(N)
    rows = []
    for i, a in enumerate(grid):
        row = _empty_row(a)
        row.update(alpha=alpha, a_stat_marker=a_stat, a_comp_marker=a_comp)
        try:
            b, c = two_block_from_alpha(n, N, a, alpha)
            spec = TwoBlockSpec(n, N, a, c)
        except (InfeasibleAlternative, InvalidParameters):
            row["status"] = "infeasible"
            rows.append(row)
            continue
        row.update(b=b, c=c)
        params = spec.to_params()

        def one(r, params=params, i=i):
            g = sample(params, seed, 1, i, r)
            try:
                sg = sgnq_psi(g, level=kappa).reject
            except DegenerateInput:
                sg = None
            try:
                sc = oracle_scan(g, planted) > tau
            except DegenerateInput:
                sc = None
            return sg, sc

        res = _map_reps(one, m_pow, threads)
        for key, col in ((0, "sgnq"), (1, "scan")):
            vals = [x[key] for x in res]
            if sum(v is None for v in vals) > m_pow / 2:
                row["status"] = "degenerate"
            p = sum(bool(v) for v in vals) / m_pow
            row[f"power_{col}"] = p
            row[f"se_{col}"] = _binomial_se(p, m_pow)
        rows.append(row)
    meta = {"scan_threshold": tau, "a_stat_marker": a_stat, "a_comp_marker": a_comp,
            "m_cal": m_cal, "m_pow": m_pow, "scan_power_is_lower_bound": True}
    return rows, meta


def unmatched_params(n, N, a, c):
    """Two-block SBM with every cross and background probability equal to ``c``."""
    z = np.zeros(n, dtype=np.int64)
    z[:N] = 1
    return DcbmParams(np.ones(n), z, np.array([[c, c], [c, a]]))


def chi2_vs_sgnq_experiment(n, N, c, mode="matched", reps=50, kappa=0.05, seed=0,
                            a_grid_values=None, threads=1, points=20, two_sided=False):
    """Power of SgnQ and chi2 along ``a`` from ``c`` to ``c (n - N) / N``.

    ``mode="matched"`` uses the degree-matched cross probability
    ``b = (c (n - N) - a N) / (n - 2N)``; ``mode="unmatched"`` keeps it at ``c``.
    Both tests use their asymptotic normal thresholds.
    """
    if mode not in ("matched", "unmatched"):
        raise InvalidParameters(f"mode must be 'matched' or 'unmatched', got {mode!r}")
    a_hi = feasible_a_max(n, N, c=c)
    grid = a_grid_values if a_grid_values is not None else a_grid(c, a_hi, points)
    a_stat, a_comp = threshold_markers(n, N, c=c)
    rows = []
    for i, a in enumerate(grid):
        row = _empty_row(a)
        row.update(c=c, a_stat_marker=a_stat, a_comp_marker=a_comp)
        try:
            if mode == "matched":
                spec = TwoBlockSpec(n, N, a, c)
                params = spec.to_params()
                row.update(b=spec.b, alpha=matched_null_alpha(spec))
            else:
                if not 0.0 <= a <= 1.0:
                    raise InvalidParameters(f"a={a} is not a probability")
                params = unmatched_params(n, N, a, c)
                row.update(b=c, alpha=(a * N * (N - 1) + c * (n * (n - 1) - N * (N - 1))) / (n * (n - 1)))
        except (InfeasibleAlternative, InvalidParameters):
            row["status"] = "infeasible"
            rows.append(row)
            continue

        def one(r, params=params, i=i):
            g = sample(params, seed, 2, i, r)
            out = []
            for fn in (lambda: sgnq_psi(g, level=kappa).reject,
                       lambda: chi2_statistic(g, level=kappa, two_sided=two_sided).reject):
                try:
                    out.append(fn())
                except DegenerateInput:
                    out.append(None)
            return out

        res = _map_reps(one, reps, threads)
        for key, col in ((0, "sgnq"), (1, "chi2")):
            vals = [x[key] for x in res]
            if sum(v is None for v in vals) > reps / 2:
                row["status"] = "degenerate"
            p = sum(bool(v) for v in vals) / reps
            row[f"power_{col}"] = p
            row[f"se_{col}"] = _binomial_se(p, reps)
        rows.append(row)
    meta = {"mode": mode, "reps": reps, "a_stat_marker": a_stat, "a_comp_marker": a_comp}
    return rows, meta


def run_power_curve(spec):
    """Dispatch a :class:`PowerCurveSpec` to the matching sweep."""
    if spec.mode == "fixed-alpha":
        return scan_vs_sgnq_experiment(
            spec.n, spec.N, spec.alpha, spec.a_grid, m_cal=spec.m_cal, m_pow=spec.reps,
            kappa=spec.level, seed=spec.seed, threads=spec.threads)
    if spec.mode == "fixed-c":
        return chi2_vs_sgnq_experiment(
            spec.n, spec.N, spec.c, mode=spec.degree, reps=spec.reps, kappa=spec.level,
            seed=spec.seed, a_grid_values=spec.a_grid, threads=spec.threads)
    raise InvalidParameters(f"unknown mode {spec.mode!r}")


# -- null calibration check -------------------------------------------------------------

@dataclass
class NullSummary:
    reps: int
    mean: float
    variance: float
    ks_distance: float
    variance_defined: bool
    n_degenerate: int = 0
    psi: list = field(default_factory=list, repr=False)


def ks_distance_normal(x):
    """``sup_t |F_n(t) - Phi(t)|`` for the sample ``x``."""
    x = np.sort(np.asarray(x, dtype=float))
    m = x.size
    cdf = np.array([normal_cdf(v) for v in x])
    upper = np.arange(1, m + 1) / m - cdf
    lower = cdf - np.arange(0, m) / m
    return float(max(upper.max(), lower.max()))


def null_distribution_check(theta_mode, n, reps, seed, alpha=0.1, threads=1):
    """Mean, variance and KS distance to N(0,1) of SgnQ's ``psi`` under a one-block null.

    ``theta_mode="constant"``: ``Omega = alpha`` everywhere. ``"pareto"``:
    ``Omega = theta theta'`` with fresh i.i.d. Pareto(shape 4, scale 0.375)
    ``theta`` per replicate, probabilities above one clipped to one.
    """
    if theta_mode not in ("constant", "pareto"):
        raise InvalidParameters(f"theta_mode must be 'constant' or 'pareto', got {theta_mode!r}")
    if reps < 1:
        raise InvalidParameters("reps must be >= 1")
    z = np.zeros(n, dtype=np.int64)

    def one(r):
        if theta_mode == "constant":
            params = DcbmParams(np.ones(n), z, [[alpha]])
        else:
            params = DcbmParams(pareto_theta(n, seed, r, 0), z, [[1.0]])
        g = sample(params, seed, r, 1, clip=True)
        try:
            return sgnq_psi(g).standardized
        except DegenerateInput:
            return None

    vals = _map_reps(one, reps, threads)
    psi = [v for v in vals if v is not None]
    m = len(psi)
    mean = float(np.mean(psi)) if m else float("nan")
    var = float(np.var(psi, ddof=1)) if m > 1 else float("nan")
    ks = ks_distance_normal(psi) if m else float("nan")
    return NullSummary(reps, mean, var, ks, m > 1, reps - m, psi)


# -- phase diagram ---------------------------------------------------------------------

class RegionLabel(str, Enum):
    IMPOSSIBLE = "Impossible"
    COMP_INFEASIBLE = "CompInfeasible"
    SGNQ_POWERFUL = "SgnqPowerful"
    OPEN_MODERATE = "OpenModerate"
    BOUNDARY = "Boundary"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PhasePoint:
    """``N = n^(1 - beta)``, ``(a - c) / sqrt(c) = n^(-gamma)``."""

    beta: float
    gamma: float


PHASE_TOL = 1e-12


def phase_classify(p, gamma=None, tol=PHASE_TOL):
    """Region of the (beta, gamma) plane; accepts a PhasePoint or two floats."""
    if gamma is None:
        beta, gamma = p.beta, p.gamma
    else:
        beta = p
    if not 0.0 < beta < 1.0:
        raise InvalidParameters(f"beta must lie in (0, 1), got {beta}")
    impossible = beta + 2.0 * gamma - 1.0
    if abs(impossible) <= tol:
        return RegionLabel.BOUNDARY
    if impossible > 0:
        return RegionLabel.IMPOSSIBLE
    sgnq = beta + gamma - 0.5
    if abs(sgnq) <= tol:
        return RegionLabel.BOUNDARY
    if sgnq < 0:
        return RegionLabel.SGNQ_POWERFUL
    if abs(gamma) <= tol:
        return RegionLabel.BOUNDARY
    return RegionLabel.COMP_INFEASIBLE if gamma > 0 else RegionLabel.OPEN_MODERATE


def phase_grid(betas, gammas):
    return [{"beta": float(b), "gamma": float(g), "region": phase_classify(float(b), float(g)).value}
            for b in betas for g in gammas]


def open_interval_grid(lo, hi, points):
    """``points`` cell midpoints of ``(lo, hi)`` (endpoints excluded)."""
    step = (hi - lo) / points
    return [lo + (k + 0.5) * step for k in range(points)]


# -- output ------------------------------------------------------------------------------

def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "" if not math.isfinite(x) else repr(x)
    return str(x)


def to_csv(rows, columns=None, header_comments=()):
    """Render rows as CSV: header always present, '.' decimals, '\\n' line ends."""
    columns = list(columns or TABLE_COLUMNS)
    buf = io.StringIO()
    for line in header_comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(col)) for col in columns])
    return buf.getvalue()


def to_json(rows, config, meta=None):
    doc = {"version": __version__, "config": config, "meta": meta or {}, "rows": rows}
    return json.dumps(doc, default=_json_default, allow_nan=False, indent=2) + "\n"


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, Enum):
        return x.value
    raise TypeError(f"not JSON serializable: {type(x).__name__}")
