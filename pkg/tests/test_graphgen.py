from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smsclust.errors import ParameterError
from smsclust.graphgen import (THREE_BLOCK, TWO_BLOCK, SbmParams, edge_probability_matrix,
                               latent_positions_from_sbm, sample_memberships, sample_rdpg,
                               sample_sbm, sample_sbm_conditional)


def assert_adjacency(A):
    assert A.shape[0] == A.shape[1]
    assert np.array_equal(A, A.T)
    assert np.all(np.diag(A) == 0)
    assert set(np.unique(A)).issubset({0.0, 1.0})


def block_density(A, tau, k, l):
    rows = tau == k
    cols = tau == l
    sub = A[np.ix_(rows, cols)]
    if k == l:
        m = rows.sum()
        return sub.sum() / 2, m * (m - 1) / 2
    return sub.sum(), rows.sum() * cols.sum()


class TestParams:
    def test_rejects_asymmetric(self):
        with pytest.raises(ParameterError):
            SbmParams(B=[[0.1, 0.2], [0.3, 0.1]], pi=[0.5, 0.5])

    def test_rejects_out_of_range(self):
        with pytest.raises(ParameterError):
            SbmParams(B=[[1.2]], pi=[1.0])

    @pytest.mark.parametrize("pi", [[0.5, 0.6], [1.0, 0.0], [0.5, 0.5, 0.0]])
    def test_rejects_bad_pi(self, pi):
        with pytest.raises(ParameterError):
            SbmParams(B=np.full((len(pi), len(pi)), 0.1), pi=pi)

    def test_frozen_arrays(self):
        with pytest.raises(ValueError):
            TWO_BLOCK.B[0, 0] = 0.9


class TestMemberships:
    def test_degenerate_categorical(self):
        assert sample_memberships([1.0], 5, seed=0).tolist() == [1, 1, 1, 1, 1]

    def test_balanced_fraction(self):
        tau = sample_memberships([0.5, 0.5], 100_000, seed=3)
        # 6 sigma for a Binomial(1e5, 0.5) fraction is ~0.0095
        assert abs(np.mean(tau == 1) - 0.5) <= 0.01

    def test_deterministic(self):
        a = sample_memberships([0.2, 0.3, 0.5], 1000, seed=11)
        b = sample_memberships([0.2, 0.3, 0.5], 1000, seed=11)
        assert np.array_equal(a, b)

    def test_invalid_pi(self):
        with pytest.raises(ParameterError):
            sample_memberships([0.7, 0.7], 10, seed=0)

    @given(st.lists(st.floats(0.05, 1.0), min_size=1, max_size=6), st.integers(1, 300),
           st.integers(0, 2**32))
    def test_labels_in_range(self, raw, n, seed):
        pi = np.array(raw) / np.sum(raw)
        pi[-1] = 1.0 - pi[:-1].sum()
        tau = sample_memberships(pi, n, seed)
        assert tau.shape == (n,)
        assert tau.min() >= 1 and tau.max() <= len(pi)


class TestEdgeProbability:
    def test_two_block(self):
        P = edge_probability_matrix(TWO_BLOCK, [1, 2])
        assert np.array_equal(P, [[0.2, 0.1], [0.1, 0.25]])

    def test_constant(self):
        P = edge_probability_matrix(SbmParams(B=[[0.3]], pi=[1.0]), [1, 1, 1])
        assert np.array_equal(P, np.full((3, 3), 0.3))

    def test_three_block_identity_labels(self):
        P = edge_probability_matrix(THREE_BLOCK, [1, 2, 3])
        assert np.array_equal(P, THREE_BLOCK.B)

    def test_label_out_of_range(self):
        with pytest.raises(ParameterError):
            edge_probability_matrix(TWO_BLOCK, [1, 3])


class TestSampling:
    def test_complete_graph(self):
        A = sample_sbm_conditional(SbmParams(B=[[1.0]], pi=[1.0]), [1, 1, 1, 1], seed=0)
        assert np.array_equal(A, np.ones((4, 4)) - np.eye(4))

    def test_empty_graph(self):
        A = sample_sbm_conditional(SbmParams(B=np.zeros((2, 2)), pi=[0.5, 0.5]),
                                   [1, 2, 1, 2, 2], seed=0)
        assert not A.any()

    def test_block_densities_concentrate(self):
        tau = np.repeat([1, 2], 1000)
        A = sample_sbm_conditional(TWO_BLOCK, tau, seed=5)
        assert_adjacency(A)
        for k in (1, 2):
            for l in (1, 2):
                edges, pairs = block_density(A, tau, k, l)
                b = TWO_BLOCK.B[k - 1, l - 1]
                assert abs(edges / pairs - b) <= 6 * np.sqrt(b * (1 - b) / pairs)

    def test_single_vertex(self):
        tau, A = sample_sbm(1, TWO_BLOCK, seed=0)
        assert tau.shape == (1,)
        assert np.array_equal(A, [[0.0]])

    def test_reproducible(self):
        t1, A1 = sample_sbm(300, THREE_BLOCK, seed=42)
        t2, A2 = sample_sbm(300, THREE_BLOCK, seed=42)
        assert np.array_equal(t1, t2) and np.array_equal(A1, A2)

    def test_two_block_n1000(self):
        tau, A = sample_sbm(1000, TWO_BLOCK, seed=1)
        assert_adjacency(A)
        assert set(np.unique(tau)) == {1, 2}

    @given(st.integers(1, 60), st.floats(0.0, 1.0), st.integers(0, 2**32))
    def test_sample_invariants(self, n, p, seed):
        _, A = sample_sbm(n, SbmParams(B=[[p, p / 2], [p / 2, p]], pi=[0.5, 0.5]), seed)
        assert_adjacency(A)


class TestRdpg:
    def test_homogeneous(self):
        X = np.tile([np.sqrt(0.5), 0.0], (400, 1))
        A = sample_rdpg(X, seed=2)
        assert_adjacency(A)
        pairs = 400 * 399 / 2
        assert abs(A.sum() / 2 / pairs - 0.5) <= 6 * np.sqrt(0.25 / pairs)

    def test_zero_positions(self):
        assert not sample_rdpg(np.zeros((10, 3)), seed=0).any()

    def test_rejects_bad_inner_products(self):
        with pytest.raises(ParameterError):
            sample_rdpg(np.ones((3, 2)), seed=0)

    def test_matches_sbm_in_distribution(self):
        tau = np.repeat([1, 2], 100)
        X = latent_positions_from_sbm(TWO_BLOCK, tau)
        assert np.allclose(X @ X.T, edge_probability_matrix(TWO_BLOCK, tau), atol=1e-12)
        dens_rdpg = np.zeros((2, 2))
        dens_sbm = np.zeros((2, 2))
        reps = 50
        for r in range(reps):
            A1 = sample_rdpg(X, seed=r)
            A2 = sample_sbm_conditional(TWO_BLOCK, tau, seed=10_000 + r)
            for k in (1, 2):
                for l in (1, 2):
                    e1, pairs = block_density(A1, tau, k, l)
                    e2, _ = block_density(A2, tau, k, l)
                    dens_rdpg[k - 1, l - 1] += e1 / pairs / reps
                    dens_sbm[k - 1, l - 1] += e2 / pairs / reps
        for k in range(2):
            for l in range(2):
                b = TWO_BLOCK.B[k, l]
                pairs = 100 * 99 / 2 if k == l else 100 * 100
                sd = np.sqrt(b * (1 - b) / (pairs * reps))
                assert abs(dens_rdpg[k, l] - b) <= 6 * sd
                assert abs(dens_rdpg[k, l] - dens_sbm[k, l]) <= 6 * np.sqrt(2) * sd
