"""Signed-quadrilateral (SgnQ) statistic.

With ``eta = A1 / sqrt(1'A1)`` and ``Ahat = A - eta eta'``, ``Q`` sums
``Ahat[i1,i2] Ahat[i2,i3] Ahat[i3,i4] Ahat[i4,i1]`` over ordered 4-tuples of
pairwise distinct nodes.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..exceptions import DegenerateInput
from ..graph import degrees, edge_count
from .normal import normal_sf, z_upper
from .outcome import TestOutcome

NAIVE_MAX_N = 60


@dataclass(frozen=True)
class EtaHat:
    eta: np.ndarray
    norm_sq: float
    total: int


def eta_hat(g):
    m = edge_count(g)
    if m == 0:
        raise DegenerateInput("graph has no edges; eta_hat is undefined")
    y = degrees(g).astype(float)
    total = 2 * m
    eta = y / np.sqrt(total)
    # sum(y**2) / total computed from integers avoids a rounding step
    norm_sq = float(np.sum(degrees(g) ** 2)) / total
    return EtaHat(eta, norm_sq, total)


def _check_sgnq_input(g):
    if g.n < 4:
        raise DegenerateInput(f"SgnQ needs n >= 4, got n={g.n}")
    return eta_hat(g)


def sgnq_q_naive(g):
    """Literal O(n^4) sum over ordered distinct 4-tuples (reference oracle)."""
    eh = _check_sgnq_input(g)
    n = g.n
    if n > NAIVE_MAX_N:
        raise ValueError(f"naive Q is O(n^4); refusing n={n} > {NAIVE_MAX_N}")
    M = g.to_dense() - np.outer(eh.eta, eh.eta)
    idx = np.arange(n)
    total = 0.0
    # one slab per i1 keeps memory at O(n^3)
    for i in range(n):
        # path[j, k, l] = M[i, j] M[j, k] M[k, l] M[l, i]
        path = (M[i, :, None, None] * M[:, :, None] * M[None, :, :]) * M[None, None, :, i]
        j, k, l = np.ix_(idx, idx, idx)
        distinct = (j != i) & (k != i) & (l != i) & (j != k) & (j != l) & (k != l)
        total += path[distinct].sum()
    return float(total)


def sgnq_q_fast(g):
    """``Q`` from sparse contractions, without forming the dense centred matrix.

    Let ``M`` be ``A - eta eta'`` with its diagonal zeroed, i.e.
    ``M = B - eta eta'`` with ``B = A + diag(eta**2)``. Closed walks of length
    four on a zero-diagonal matrix can only repeat a node as ``i1 = i3`` or
    ``i2 = i4``, so

        Q = tr(M^4) - 2 sum_i s_i^2 + sum_{i != j} M_ij^4,   s_i = (M^2)_ii.

    ``tr(M^4) = ||M^2||_F^2`` with ``M^2 = B^2 - u eta' - eta u' + q eta eta'``,
    ``u = B eta`` and ``q = ||eta||^2``; the Frobenius norm is expanded so only
    the sparse ``B^2`` is ever built. Cost is O(n dbar^2).
    """
    eh = _check_sgnq_input(g)
    eta = eh.eta
    A = g.adjacency
    q = float(eta @ eta)
    eta2 = eta * eta
    B = (A + sp.diags(eta2)).tocsr()
    u = B @ eta
    S = B @ B
    frob_S = float(np.sum(S.data ** 2))
    cross = -2.0 * float(u @ (B @ u)) + q * float(u @ u)
    alpha = float(u @ u)
    beta = float(u @ eta)
    frob_R = 2.0 * alpha * q + q ** 4 + 2.0 * beta ** 2 - 4.0 * q * q * beta
    trace_m4 = frob_S + 2.0 * cross + frob_R

    y = degrees(g).astype(float)
    Aeta = A @ eta
    s = y - 2.0 * eta * Aeta + eta2 * (q - eta2)

    eta4 = eta2 * eta2
    fourth = float(eta4.sum()) ** 2 - float(np.sum(eta4 * eta4))
    coo = A.tocoo()
    x = eta[coo.row] * eta[coo.col]
    fourth += float(np.sum((1.0 - x) ** 4 - x ** 4))

    return trace_m4 - 2.0 * float(s @ s) + fourth


def sgnq_psi(g, level=0.05, q_value=None):
    """Standardized SgnQ test with a one-sided normal p-value.

    ``psi = (Q - 2 (q - 1)^2) / sqrt(8 (q - 1)^4)`` with ``q = ||eta||^2``;
    rejects when ``psi >= z_level``.
    """
    eh = _check_sgnq_input(g)
    q1 = eh.norm_sq - 1.0
    if not q1 > 0:
        raise DegenerateInput(f"||eta||^2 = {eh.norm_sq} <= 1; SgnQ variance proxy is not positive")
    Q = sgnq_q_fast(g) if q_value is None else float(q_value)
    mean = 2.0 * q1 ** 2
    sd = np.sqrt(8.0) * q1 ** 2
    psi = (Q - mean) / sd
    return TestOutcome(
        test_name="sgnq",
        statistic=Q,
        standardized=float(psi),
        p_value=normal_sf(psi),
        reject=bool(psi >= z_upper(level)),
        level=level,
        diagnostics={"eta_norm_sq": eh.norm_sq, "null_mean": mean, "null_sd": float(sd)},
    )
