"""Degree-corrected block models: parameters, calibration, sampling, spectra.

Conventions
-----------
Community labels are integers ``0..K-1``. In two-block models label ``0`` is
the large community (size ``n - N``, within-block probability ``c``) and label
``1`` is the small planted community (size ``N``, within-block probability
``a``); the planted nodes occupy ids ``0..N-1``. ``P`` is stored in label
order, so ``P = [[c, b], [b, a]]`` and balance vectors read ``(d0, d1)``.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DegenerateInput,
    InfeasibleAlternative,
    InvalidParameters,
    SinkhornError,
)
from .graph import Graph
from .rng import stream

MAX_DENSE_N = 5000


def _frozen(x, dtype=float):
    arr = np.array(x, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class DcbmParams:
    """``Omega[i, j] = theta[i] * theta[j] * P[z[i], z[j]]``."""

    theta: np.ndarray
    memberships: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        theta = _frozen(self.theta)
        z = _frozen(self.memberships, dtype=np.int64)
        P = _frozen(np.atleast_2d(self.P))
        if theta.ndim != 1 or z.shape != theta.shape:
            raise InvalidParameters("theta and memberships must be vectors of equal length")
        if theta.size == 0:
            raise InvalidParameters("need at least one node")
        if not np.all(theta > 0) or not np.all(np.isfinite(theta)):
            raise InvalidParameters("theta must be strictly positive and finite")
        K = P.shape[0]
        if P.shape != (K, K):
            raise InvalidParameters("P must be square")
        if not np.allclose(P, P.T, rtol=0, atol=1e-14):
            raise InvalidParameters("P must be symmetric")
        if not np.all(np.diag(P) > 0):
            raise InvalidParameters("P must have a positive diagonal")
        if np.any(P < 0):
            raise InvalidParameters("P must be entrywise nonnegative")
        if z.min() < 0 or z.max() >= K:
            raise InvalidParameters(f"memberships must lie in 0..{K - 1}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "memberships", z)
        object.__setattr__(self, "P", P)

    @property
    def n(self):
        return self.theta.size

    @property
    def K(self):
        return self.P.shape[0]

    def community_sizes(self):
        return np.bincount(self.memberships, minlength=self.K)

    def block_norms(self):
        """``(sum_{i in k} theta_i, sum_{i in k} theta_i**2)`` per community."""
        l1 = np.bincount(self.memberships, weights=self.theta, minlength=self.K)
        l2 = np.bincount(self.memberships, weights=self.theta ** 2, minlength=self.K)
        return l1, l2


@dataclass(frozen=True)
class TwoBlockSpec:
    """Degree-matched two-community alternative of size ``n`` with a planted block of ``N``."""

    n: int
    N: int
    a: float
    c: float
    theta_profile: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        if not (1 <= self.N and 2 * self.N < self.n):
            raise InvalidParameters(f"need 1 <= N < n/2, got n={self.n}, N={self.N}")
        for name in ("a", "c"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidParameters(f"{name} must lie in [0, 1], got {v}")
        if self.theta_profile is not None:
            t = _frozen(self.theta_profile)
            if t.shape != (self.n,) or not np.all(t > 0):
                raise InvalidParameters("theta_profile must be a positive vector of length n")
            object.__setattr__(self, "theta_profile", t)
        # raises InfeasibleAlternative
        two_block_b(self.n, self.N, self.a, self.c)

    @property
    def b(self):
        return two_block_b(self.n, self.N, self.a, self.c)

    @property
    def epsilon(self):
        return self.N / self.n

    @property
    def is_sbm(self):
        return self.theta_profile is None or bool(np.all(self.theta_profile == self.theta_profile[0]))

    def memberships(self):
        z = np.zeros(self.n, dtype=np.int64)
        z[: self.N] = 1
        return z

    def planted_set(self):
        return np.arange(self.N)

    def P(self):
        b = self.b
        return np.array([[self.c, b], [b, self.a]])

    def to_params(self):
        theta = np.ones(self.n) if self.theta_profile is None else self.theta_profile
        return DcbmParams(theta, self.memberships(), self.P())


@dataclass(frozen=True)
class SpectralSummary:
    lambda1: float
    tilde_lambda: float
    d: tuple
    g: tuple


# -- calibration -------------------------------------------------------------

def sinkhorn_scale(P, h, tol=1e-12, max_iter=10_000, return_history=False):
    """Positive ``d`` with ``diag(d) @ P @ diag(d) @ h == 1`` (sup-norm residual <= tol).

    Symmetric Sinkhorn iteration ``d <- sqrt(d / (P @ (d * h)))``. Writing
    ``r = d * (P @ (d * h))``, one sweep maps ``log r_k`` to
    ``log(r_k)/2 + log(sum_j w_kj r_j**-0.5)`` with convex weights ``w``, so
    ``max |log r|`` never increases; ``max |r - 1|`` can rise on early sweeps.
    With ``return_history`` the per-sweep ``max |log r|`` values come back too.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    h = np.atleast_1d(np.asarray(h, dtype=float))
    K = P.shape[0]
    if P.shape != (K, K) or h.shape != (K,):
        raise InvalidParameters("P must be KxK and h length K")
    if not np.all(np.diag(P) > 0):
        raise InvalidParameters("P must have a strictly positive diagonal")
    if np.any(P < 0):
        raise InvalidParameters("P must have nonnegative off-diagonal entries")
    if not np.all(h > 0):
        raise InvalidParameters("h must be strictly positive")

    d = 1.0 / np.sqrt(np.diag(P) * h)
    history = []
    for it in range(max_iter + 1):
        Pdh = P @ (d * h)
        r = d * Pdh
        history.append(float(np.max(np.abs(np.log(r)))))
        resid = float(np.max(np.abs(r - 1.0)))
        if resid <= tol:
            break
        if it == max_iter:
            raise SinkhornError(
                f"no convergence after {max_iter} sweeps (residual {resid:.3e})",
                residual=resid, iterations=max_iter)
        d = np.sqrt(d / Pdh)
    if return_history:
        return d, history
    return d


def community_fractions(params):
    sizes = params.community_sizes()
    if np.any(sizes == 0):
        raise InvalidParameters("every community must be nonempty")
    return sizes / params.n


def canonicalize(params, tol=1e-12, max_iter=10_000):
    """Equivalent parameters with ``||theta||_1 = n`` and ``P @ h`` proportional to ones.

    ``h`` holds the community fractions. The scaling ``D`` from
    :func:`sinkhorn_scale` moves into ``theta`` community-wise, then ``theta``
    and ``P`` are rescaled against each other so that ``||theta||_1 = n``.
    ``Omega`` is unchanged.
    """
    h = community_fractions(params)
    d = sinkhorn_scale(params.P, h, tol=tol, max_iter=max_iter)
    P_star = d[:, None] * params.P * d[None, :]
    theta_star = params.theta / d[params.memberships]
    s = theta_star.sum()
    n = params.n
    return DcbmParams(theta_star * (n / s), params.memberships, P_star * (s / n) ** 2)


# -- two-block alternatives ----------------------------------------------------

def two_block_b(n, N, a, c):
    """Cross-block probability that degree-matches the planted block to the rest."""
    if not 2 * N < n:
        raise InvalidParameters(f"need N < n/2, got n={n}, N={N}")
    b = (c * (n - N) - a * N) / (n - 2 * N)
    if b < 0:
        if b > -1e-15 * max(1.0, c * (n - N)):
            return 0.0
        raise InfeasibleAlternative(
            f"a={a} exceeds c(n-N)/N={c * (n - N) / N}: cross-block probability b={b} < 0")
    return b


def two_block_from_alpha(n, N, a, alpha):
    """``(b, c)`` making the two-block SBM degree-matched to Erdos-Renyi(``alpha``)."""
    if not 2 * N < n:
        raise InvalidParameters(f"need N < n/2, got n={n}, N={N}")
    c = (a * N ** 2 + alpha * n ** 2 - 2 * alpha * n * N) / (n - N) ** 2
    if not 0.0 <= c <= 1.0:
        raise InfeasibleAlternative(f"implied c={c} is not a probability")
    b = (n * c - (a + c) * N) / (n - 2 * N)
    if b < 0:
        if b > -1e-15 * max(1.0, n * c):
            b = 0.0
        else:
            raise InfeasibleAlternative(f"a={a} exceeds alpha*n/N={alpha * n / N}: b={b} < 0")
    return b, c


def a_max_for_alpha(n, N, alpha):
    return alpha * n / N


def a_max_for_c(n, N, c):
    return c * (n - N) / N


def matched_null_alpha(spec):
    eps = spec.N / spec.n
    return spec.a * eps + spec.b * (1 - eps)


# -- Omega and sampling --------------------------------------------------------

def omega(params, clip=False, max_n=MAX_DENSE_N):
    """Dense ``Theta Pi P Pi' Theta``; entries outside [0, 1] raise unless ``clip``."""
    if params.n > max_n:
        raise InvalidParameters(f"dense Omega capped at n={max_n}; got n={params.n}")
    z = params.memberships
    Om = params.theta[:, None] * params.theta[None, :] * params.P[np.ix_(z, z)]
    if clip:
        return np.minimum(Om, 1.0)
    bad = np.argwhere(Om > 1.0)
    if bad.size:
        i, j = bad[0]
        raise InvalidParameters(f"Omega[{i}, {j}] = {Om[i, j]:.6g} exceeds 1")
    return Om


def _upper_probabilities(source, rows, clip):
    """Probabilities for pairs (i, j > i), i in ``rows``, in row-major order."""
    if isinstance(source, DcbmParams):
        th, z, P = source.theta, source.memberships, source.P
        parts = [th[i] * th[i + 1:] * P[z[i], z[i + 1:]] for i in rows]
    else:
        parts = [source[i, i + 1:] for i in rows]
    p = np.concatenate(parts) if parts else np.empty(0)
    if clip:
        p = np.minimum(p, 1.0)
    elif p.size and (p.max() > 1.0 or p.min() < 0.0):
        k = int(np.argmax((p > 1.0) | (p < 0.0)))
        raise InvalidParameters(f"edge probability {p[k]:.6g} outside [0, 1]")
    return p


def sample(source, seed, *path, clip=False, chunk=1 << 20):
    """Draw ``A`` with ``A[i, j] ~ Bernoulli(Omega[i, j])`` independently for ``i < j``.

    ``source`` is a :class:`DcbmParams` (probabilities generated row by row,
    no dense ``Omega``), a :class:`TwoBlockSpec`, or an explicit ``n x n``
    matrix. Uniforms are consumed in row-major upper-triangle order from the
    stream ``(seed, *path)``, so the result is a pure function of its inputs.
    """
    if isinstance(source, TwoBlockSpec):
        source = source.to_params()
    if isinstance(source, DcbmParams):
        n = source.n
    else:
        source = np.asarray(source, dtype=float)
        if source.ndim != 2 or source.shape[0] != source.shape[1]:
            raise InvalidParameters("Omega must be square")
        n = source.shape[0]
    rng = stream(seed, *path)
    iu_parts, ju_parts = [], []
    start = 0
    while start < n - 1:
        stop, count = start, 0
        while stop < n - 1 and (count == 0 or count + (n - 1 - stop) <= chunk):
            count += n - 1 - stop
            stop += 1
        rows = range(start, stop)
        p = _upper_probabilities(source, rows, clip)
        hit = rng.random(p.size) < p
        if hit.any():
            ii = np.concatenate([np.full(n - 1 - i, i) for i in rows])
            jj = np.concatenate([np.arange(i + 1, n) for i in rows])
            iu_parts.append(ii[hit])
            ju_parts.append(jj[hit])
        start = stop
    if iu_parts:
        iu = np.concatenate(iu_parts).tolist()
        ju = np.concatenate(ju_parts).tolist()
        return Graph(n, zip(iu, ju))
    return Graph(n)


def sample_random_membership(n, epsilon, seed, *path):
    """Labels ``X_i ~ Bernoulli(epsilon)`` i.i.d. (1 = planted community)."""
    if not 0.0 <= epsilon <= 1.0:
        raise InvalidParameters(f"epsilon must lie in [0, 1], got {epsilon}")
    rng = stream(seed, *path)
    return (rng.random(n) < epsilon).astype(np.int64)


def pareto_theta(n, seed, *path, shape=4.0, scale=0.375):
    """I.i.d. Pareto (type I) degree parameters: support ``[scale, inf)``, tail index ``shape``."""
    rng = stream(seed, *path)
    return scale * (1.0 + rng.pareto(shape, size=n))


# -- spectral diagnostics -------------------------------------------------------

def tilde_omega(Om):
    """``Omega - (1' Omega 1)^{-1} Omega 1 1' Omega``."""
    Om = np.asarray(Om, dtype=float)
    r = Om.sum(axis=1)
    total = r.sum()
    if not total > 0:
        raise DegenerateInput("Omega has zero total mass")
    return Om - np.outer(r, r) / total


def balance_vectors(params):
    """``d = Pi' theta / ||theta||_1`` and ``g = Pi' theta**2 / ||theta||**2``."""
    l1, l2 = params.block_norms()
    return l1 / l1.sum(), l2 / l2.sum()


def tilde_p(params):
    d, _ = balance_vectors(params)
    P = params.P
    Pd = P @ d
    return P - np.outer(Pd, Pd) / (d @ Pd)


def tilde_lambda_two_block(params):
    """Closed-form nonzero eigenvalue of ``tilde_omega`` for K = 2."""
    if params.K != 2:
        raise InvalidParameters("closed form needs K = 2")
    d, g = balance_vectors(params)
    c, b, a = params.P[0, 0], params.P[0, 1], params.P[1, 1]
    d0, d1 = d
    g0, g1 = g
    norm2 = float(params.theta @ params.theta)
    return norm2 * (a * c - b * b) * (d0 ** 2 * g1 + d1 ** 2 * g0) / (
        a * d1 ** 2 + 2 * b * d0 * d1 + c * d0 ** 2)


def block_eigenvalues(params, centered=False):
    """Nonzero eigenvalues of ``Omega`` (or ``tilde_omega``) via the K x K reduction.

    ``Theta Pi M Pi' Theta`` shares its nonzero spectrum with
    ``G^{1/2} M G^{1/2}``, ``G = diag(sum_{i in k} theta_i**2)``. Sorted by
    decreasing magnitude.
    """
    M = tilde_p(params) if centered else params.P
    _, l2 = params.block_norms()
    s = np.sqrt(l2)
    vals = np.linalg.eigvalsh(s[:, None] * M * s[None, :])
    return vals[np.argsort(-np.abs(vals))]


def sbm_eigenvalues(spec):
    """``(lambda1, lambda2)`` of the two-block SBM ``Omega`` from its 2 x 2 reduction."""
    n, N, a, c, b = spec.n, spec.N, spec.a, spec.c, spec.b
    off = math.sqrt(N * (n - N)) * b
    M = np.array([[a * N, off], [off, (n - N) * c]])
    lo, hi = np.linalg.eigvalsh(M)
    return float(hi), float(lo)


def spectral_summary(params):
    d, g = balance_vectors(params)
    lam = block_eigenvalues(params)
    if params.K == 2:
        tl = tilde_lambda_two_block(params)
    else:
        tl = float(block_eigenvalues(params, centered=True)[0])
    return SpectralSummary(float(lam[0]), float(tl), tuple(map(float, d)), tuple(map(float, g)))


# -- model specification files ---------------------------------------------------

def load_model_spec(text):
    """Parse a JSON model file into ``(TwoBlockSpec, seed)``.

    Keys: ``n``, ``N``, ``a``, ``c``, optional ``theta`` (``"ones"``,
    ``"pareto"`` or an inline array) and ``seed``. Pareto profiles are drawn
    from the stream ``(seed, 0)``.
    """
    from .rng import DEFAULT_SEED

    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameters(f"model file is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise InvalidParameters("model file must hold a JSON object")
    missing = {"n", "N", "a", "c"} - cfg.keys()
    if missing:
        raise InvalidParameters(f"model file missing keys: {sorted(missing)}")
    unknown = cfg.keys() - {"n", "N", "a", "c", "theta", "seed"}
    if unknown:
        raise InvalidParameters(f"unknown keys in model file: {sorted(unknown)}")
    seed = int(cfg.get("seed", DEFAULT_SEED))
    n, N = int(cfg["n"]), int(cfg["N"])
    theta = cfg.get("theta", "ones")
    if theta == "ones":
        profile = None
    elif theta == "pareto":
        profile = pareto_theta(n, seed, 0)
    elif isinstance(theta, list):
        profile = np.asarray(theta, dtype=float)
    else:
        raise InvalidParameters(f"theta must be 'ones', 'pareto' or an array, got {theta!r}")
    return TwoBlockSpec(n, N, float(cfg["a"]), float(cfg["c"]), theta_profile=profile), seed


def describe(spec):
    """Summary dict: b, matched alpha, lambda1, tilde lambda, d, g."""
    params = spec.to_params()
    summ = spectral_summary(params)
    return {
        "n": spec.n,
        "N": spec.N,
        "a": spec.a,
        "c": spec.c,
        "b": spec.b,
        "alpha": matched_null_alpha(spec),
        "lambda1": summ.lambda1,
        "tilde_lambda": summ.tilde_lambda,
        "d": list(summ.d),
        "g": list(summ.g),
    }
