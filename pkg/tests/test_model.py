import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netcomm import InfeasibleAlternative, InvalidParameters, SinkhornError
from netcomm.model import (
    DcbmParams,
    TwoBlockSpec,
    a_max_for_alpha,
    a_max_for_c,
    balance_vectors,
    block_eigenvalues,
    canonicalize,
    describe,
    load_model_spec,
    matched_null_alpha,
    omega,
    pareto_theta,
    sample,
    sample_random_membership,
    sbm_eigenvalues,
    sinkhorn_scale,
    spectral_summary,
    tilde_lambda_two_block,
    tilde_omega,
    two_block_b,
    two_block_from_alpha,
)


def random_params(rng, n=40, K=3):
    theta = rng.uniform(0.2, 1.0, n)
    z = np.arange(n) % K
    B = rng.uniform(0.05, 1.0, (K, K))
    return DcbmParams(theta, z, (B + B.T) / 2)


# -- Sinkhorn and canonical form --------------------------------------------------

def test_sinkhorn_balances(rng):
    for _ in range(50):
        K = int(rng.integers(1, 6))
        B = rng.uniform(0.01, 1.0, (K, K))
        P = (B + B.T) / 2
        h = rng.dirichlet(np.ones(K))
        d = sinkhorn_scale(P, h)
        assert np.all(d > 0)
        assert np.max(np.abs(d * (P @ (d * h)) - 1)) <= 1e-12


def test_sinkhorn_log_residual_monotone(rng):
    for _ in range(300):
        K = int(rng.integers(2, 6))
        B = rng.uniform(0.001, 1.0, (K, K))
        _, hist = sinkhorn_scale((B + B.T) / 2, rng.dirichlet(np.ones(K)), return_history=True)
        assert all(b <= a + 1e-13 for a, b in zip(hist, hist[1:]))


def test_sinkhorn_errors():
    with pytest.raises(InvalidParameters):
        sinkhorn_scale([[0.0, 1.0], [1.0, 1.0]], [0.5, 0.5])
    with pytest.raises(InvalidParameters):
        sinkhorn_scale([[1.0]], [0.0])
    with pytest.raises(SinkhornError):
        sinkhorn_scale([[1.0, 0.5], [0.5, 1.0]], [0.3, 0.7], max_iter=0)


def test_canonicalize_preserves_omega(rng):
    p = random_params(rng)
    q = canonicalize(p)
    assert np.allclose(omega(q), omega(p), rtol=1e-10, atol=0)
    assert q.theta.sum() == pytest.approx(p.n, rel=1e-12)
    h = q.community_sizes() / q.n
    Ph = q.P @ h
    assert np.allclose(Ph, Ph[0], rtol=1e-10)


def test_params_validation():
    with pytest.raises(InvalidParameters):
        DcbmParams([1.0, -1.0], [0, 0], [[0.5]])
    with pytest.raises(InvalidParameters):
        DcbmParams([1.0, 1.0], [0, 2], [[0.5, 0.1], [0.1, 0.5]])
    with pytest.raises(InvalidParameters):
        DcbmParams([1.0], [0], [[0.5, 0.1], [0.2, 0.5]])
    p = DcbmParams([1.0, 2.0], [0, 0], [[0.1]])
    with pytest.raises(ValueError):
        p.theta[0] = 3.0


# -- two-block parameterisation -------------------------------------------------

def test_b_formula_hand_case():
    assert two_block_b(100, 10, 0.5, 0.1) == pytest.approx(0.05)
    spec = TwoBlockSpec(100, 10, 0.5, 0.1)
    assert matched_null_alpha(spec) == pytest.approx(0.095)


def test_b_infeasible():
    with pytest.raises(InfeasibleAlternative):
        two_block_b(100, 10, 0.95, 0.1)
    assert two_block_b(100, 10, a_max_for_c(100, 10, 0.1), 0.1) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(InvalidParameters):
        TwoBlockSpec(10, 5, 0.5, 0.1)


def test_from_alpha_hand_case():
    b, c = two_block_from_alpha(30, 4, 0.5, 0.2)
    assert c == pytest.approx(140 / 676, rel=1e-14)
    assert b == pytest.approx((30 * c - (0.5 + c) * 4) / 22, rel=1e-14)
    assert b == pytest.approx(0.153846, abs=1e-6)
    assert a_max_for_alpha(30, 4, 0.2) == pytest.approx(1.5)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(20, 300), frac=st.floats(0.01, 0.45), c=st.floats(0.01, 0.5),
       t=st.floats(0.0, 1.0))
def test_degree_matching_property(n, frac, c, t):
    N = max(1, int(frac * n))
    if not 2 * N < n:
        return
    a = min(c + t * (a_max_for_c(n, N, c) - c), 1.0)
    if a < c:
        return
    spec = TwoBlockSpec(n, N, a, c)
    Om = omega(spec.to_params())
    rows = Om.sum(axis=1)
    assert np.allclose(rows, matched_null_alpha(spec) * n, rtol=1e-12, atol=0)


def test_from_alpha_matches_er_degrees():
    n, N, alpha = 40, 6, 0.2
    for a in np.linspace(alpha, min(a_max_for_alpha(n, N, alpha), 1.0), 7):
        b, c = two_block_from_alpha(n, N, a, alpha)
        spec = TwoBlockSpec(n, N, float(a), c)
        assert matched_null_alpha(spec) == pytest.approx(alpha, rel=1e-12)


# -- spectra ---------------------------------------------------------------------

def test_sbm_eigenvalue_hand_case():
    spec = TwoBlockSpec(100, 10, 0.5, 0.1)
    lam1, lam2 = sbm_eigenvalues(spec)
    assert lam1 == pytest.approx(9.5, rel=1e-12)
    assert lam2 == pytest.approx(4.5, rel=1e-12)
    assert tilde_lambda_two_block(spec.to_params()) == pytest.approx(4.5, rel=1e-12)


def test_tilde_omega_rank_one_in_two_block(rng):
    spec = TwoBlockSpec(60, 8, 0.4, 0.15, theta_profile=rng.uniform(0.5, 1.5, 60))
    p = spec.to_params()
    Om = omega(p)
    ev = np.linalg.eigvalsh(tilde_omega(Om))
    big = ev[np.argmax(np.abs(ev))]
    assert big == pytest.approx(tilde_lambda_two_block(p), rel=1e-8)
    assert np.sort(np.abs(ev))[-2] < 1e-8 * abs(big)


def test_block_eigenvalues_match_dense(rng):
    p = random_params(rng, n=30, K=3)
    dense = np.linalg.eigvalsh(omega(p))
    dense = dense[np.argsort(-np.abs(dense))][:3]
    assert np.allclose(block_eigenvalues(p), dense, rtol=1e-9)
    cen = np.linalg.eigvalsh(tilde_omega(omega(p)))
    cen = cen[np.argsort(-np.abs(cen))][:2]
    assert np.allclose(block_eigenvalues(p, centered=True)[:2], cen, rtol=1e-8)


def test_balance_vectors_and_summary():
    p = TwoBlockSpec(100, 10, 0.5, 0.1).to_params()
    d, g = balance_vectors(p)
    assert np.allclose(d, [0.9, 0.1]) and np.allclose(g, [0.9, 0.1])
    s = spectral_summary(p)
    assert s.lambda1 == pytest.approx(9.5)
    assert s.tilde_lambda == pytest.approx(4.5)


# -- sampling ----------------------------------------------------------------------

def test_sample_deterministic_and_stream_dependent():
    spec = TwoBlockSpec(50, 5, 0.6, 0.2)
    assert sample(spec, 3, 1) == sample(spec, 3, 1)
    assert sample(spec, 3, 1) != sample(spec, 3, 2)


def test_sample_edge_frequency():
    Om = np.full((60, 60), 0.3)
    counts = [len(sample(Om, 11, r).edges) for r in range(40)]
    expected = 0.3 * 60 * 59 / 2
    sd = math.sqrt(expected * 0.7 / 40)
    assert abs(np.mean(counts) - expected) < 5 * sd


def test_sample_chunking_invariant():
    spec = TwoBlockSpec(40, 4, 0.7, 0.2)
    assert sample(spec, 5, chunk=97) == sample(spec, 5)


def test_sample_rejects_probabilities_above_one():
    p = DcbmParams(np.full(5, 2.0), np.zeros(5, dtype=int), [[0.5]])
    with pytest.raises(InvalidParameters):
        sample(p, 0)
    g = sample(p, 0, clip=True)
    assert len(g.edges) == 10


def test_random_membership_and_pareto():
    z = sample_random_membership(10_000, 0.1, 4)
    assert abs(z.mean() - 0.1) < 0.01
    th = pareto_theta(20_000, 4)
    assert th.min() >= 0.375
    assert abs(th.mean() - 0.375 * 4 / 3) < 0.01
    assert np.array_equal(pareto_theta(10, 4, 1), pareto_theta(10, 4, 1))


# -- model files ----------------------------------------------------------------------

def test_load_and_describe():
    spec, seed = load_model_spec('{"n": 100, "N": 10, "a": 0.5, "c": 0.1, "seed": 9}')
    assert seed == 9
    info = describe(spec)
    assert info["b"] == pytest.approx(0.05)
    assert info["alpha"] == pytest.approx(0.095)
    assert info["lambda1"] == pytest.approx(9.5)
    assert info["tilde_lambda"] == pytest.approx(4.5)


def test_load_theta_variants():
    spec, _ = load_model_spec('{"n": 6, "N": 2, "a": 0.5, "c": 0.3, "theta": [1,1,1,1,2,2]}')
    assert not spec.is_sbm
    spec, _ = load_model_spec('{"n": 50, "N": 5, "a": 0.5, "c": 0.3, "theta": "pareto"}')
    assert spec.theta_profile.shape == (50,)


@pytest.mark.parametrize("text", [
    "not json", "[1, 2]", '{"n": 10, "N": 2, "a": 0.5}',
    '{"n": 10, "N": 2, "a": 0.5, "c": 0.2, "extra": 1}',
    '{"n": 10, "N": 2, "a": 0.5, "c": 0.2, "theta": "weird"}',
])
def test_load_rejects(text):
    with pytest.raises(InvalidParameters):
        load_model_spec(text)
