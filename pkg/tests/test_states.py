import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrwitness import states
from corrwitness.errors import DimensionMismatch, InvalidState, NotHermitian, ZeroVector
from corrwitness.linalg import expm_propagator
from corrwitness.states import (
    BipartiteState,
    DensityMatrix,
    from_pure,
    partial_trace_env,
    partial_trace_sys,
    product,
    random_bipartite,
    random_density,
    trace_distance,
)

from conftest import random_hermitian

S = 1 / math.sqrt(2)


def _cnot_states(a, b):
    psi = np.array([a, 0, 0, b])
    rho1 = BipartiteState(from_pure(psi), 2, 2)
    rho2 = BipartiteState(np.diag([abs(a) ** 2, 0, 0, abs(b) ** 2]).astype(complex), 2, 2)
    return rho1, rho2


class TestDensityMatrix:
    def test_valid(self):
        assert DensityMatrix(np.eye(3) / 3).dim == 3

    def test_trace_rejected(self):
        with pytest.raises(InvalidState):
            DensityMatrix(np.eye(2))

    def test_negative_rejected(self):
        with pytest.raises(InvalidState):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_tolerance_accepted(self):
        DensityMatrix(np.diag([1.0 + 5e-11, -5e-11]))

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            DensityMatrix([[0.5, 0.5], [0, 0.5]])

    def test_immutable(self):
        rho = DensityMatrix(np.eye(2) / 2)
        with pytest.raises(ValueError):
            rho.mat[0, 0] = 1

    def test_bipartite_dims(self):
        with pytest.raises(DimensionMismatch):
            BipartiteState(DensityMatrix(np.eye(4) / 4), 2, 3)


class TestFromPure:
    def test_basis(self):
        assert np.array_equal(from_pure([1, 0]).mat, np.diag([1, 0]))

    def test_plus(self):
        assert np.allclose(from_pure([S, S]).mat, [[0.5, 0.5], [0.5, 0.5]])

    def test_unnormalized_input(self):
        assert np.allclose(from_pure([3, 0, 0, 3]).mat, from_pure([S, 0, 0, S]).mat)

    def test_bell_like(self):
        m = from_pure([S, 0, 0, S]).mat
        expected = np.zeros((4, 4))
        expected[np.ix_([0, 3], [0, 3])] = 0.5
        assert np.allclose(m, expected)
        assert np.allclose(m @ m, m)

    def test_zero(self):
        with pytest.raises(ZeroVector):
            from_pure([0, 0])


class TestPartialTrace:
    def test_product_marginals(self, backend, rng):
        s, e = random_density(2, rng), random_density(3, rng)
        rho = product(s, e)
        assert np.allclose(partial_trace_env(rho).mat, s.mat, atol=1e-15)
        assert np.allclose(partial_trace_sys(rho).mat, e.mat, atol=1e-15)

    def test_bell(self, backend):
        bell = BipartiteState(from_pure([S, 0, 0, S]), 2, 2)
        assert np.allclose(partial_trace_env(bell).mat, np.eye(2) / 2)
        assert np.allclose(partial_trace_sys(bell).mat, np.eye(2) / 2)

    def test_cnot_marginals(self, backend):
        a, b = 0.6, 0.8j
        rho1, rho2 = _cnot_states(a, b)
        expected = np.diag([0.36, 0.64])
        for rho in (rho1, rho2):
            assert np.allclose(partial_trace_env(rho).mat, expected, atol=1e-15)
            assert np.allclose(partial_trace_sys(rho).mat, expected, atol=1e-15)

    def test_index_formula(self, backend, rng):
        rho = random_bipartite(3, 4, rng)
        r = rho.mat.reshape(3, 4, 3, 4)
        env = np.array([[sum(r[i, k, j, k] for k in range(4)) for j in range(3)] for i in range(3)])
        sys_ = np.array([[sum(r[k, i, k, j] for k in range(3)) for j in range(4)] for i in range(4)])
        assert np.allclose(partial_trace_env(rho).mat, env, atol=1e-15)
        assert np.allclose(partial_trace_sys(rho).mat, sys_, atol=1e-15)

    def test_linear_and_trace_preserving(self, rng):
        r1, r2 = random_bipartite(2, 3, rng), random_bipartite(2, 3, rng)
        mix = states.mixture([0.3, 0.7], [r1, r2])
        mixed = partial_trace_env(BipartiteState(mix, 2, 3)).mat
        assert np.allclose(mixed, 0.3 * partial_trace_env(r1).mat + 0.7 * partial_trace_env(r2).mat)
        assert abs(np.trace(mixed) - 1) < 1e-14


def test_product_of_cnot_marginals():
    rho1, _ = _cnot_states(S, S)
    p = states.product_of_marginals(rho1)
    assert np.allclose(p.mat, np.eye(4) / 4)
    assert (p.dim_s, p.dim_e) == (2, 2)


class TestTraceDistance:
    def test_identical(self, rng):
        rho = random_density(4, rng)
        assert trace_distance(rho, rho) == 0

    def test_orthogonal(self):
        assert abs(trace_distance(from_pure([1, 0]), from_pure([0, 1])) - 1) < 1e-15

    def test_zero_vs_plus(self, backend):
        # difference [[1/2,-1/2],[-1/2,-1/2]] has eigenvalues +-1/sqrt(2)
        assert abs(trace_distance(from_pure([1, 0]), from_pure([S, S])) - S) < 1e-15

    @pytest.mark.parametrize("a,b", [(S, S), (0.6, 0.8), (0.6, 0.8j), (0.3 + 0.4j, math.sqrt(0.75))])
    def test_cnot_pair(self, backend, a, b):
        rho1, rho2 = _cnot_states(a, b)
        assert abs(trace_distance(rho1, rho2) - abs(a * b)) < 1e-14

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            trace_distance(np.eye(2) / 2, np.eye(3) / 3)


@settings(max_examples=60, deadline=None)
@given(dim=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_metric_axioms(dim, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_density(dim, rng) for _ in range(3))
    dab = trace_distance(a, b)
    assert 0 <= dab <= 1 + 1e-10
    assert abs(dab - trace_distance(b, a)) < 1e-10
    assert trace_distance(a, a) < 1e-10
    assert dab <= trace_distance(a, c) + trace_distance(c, b) + 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), split=st.sampled_from([(2, 2), (2, 3), (3, 2), (2, 4)]))
def test_data_processing_properties(seed, split):
    rng = np.random.default_rng(seed)
    ds, de = split
    r1, r2 = random_bipartite(ds, de, rng), random_bipartite(ds, de, rng)
    assert trace_distance(partial_trace_env(r1), partial_trace_env(r2)) <= trace_distance(r1, r2) + 1e-10
    s1, s2, e1, e2 = (random_density(d, rng) for d in (ds, ds, de, de))
    d_s = trace_distance(s1, s2)
    assert abs(trace_distance(product(s1, e1), product(s2, e1)) - d_s) < 1e-10
    assert trace_distance(product(s1, e1), product(s2, e2)) <= d_s + trace_distance(e1, e2) + 1e-10
    u = expm_propagator(random_hermitian(ds * de, rng), 1.3)
    rot = lambda r: DensityMatrix(u @ r.mat @ u.conj().T, validate=False)
    assert abs(trace_distance(rot(r1), rot(r2)) - trace_distance(r1, r2)) < 1e-10


class TestRandomStates:
    def test_dim_one(self):
        assert np.allclose(random_density(1, 0).mat, [[1]])
        assert abs(abs(states.random_pure(1, 0)[0]) - 1) < 1e-15

    def test_seed_determinism(self):
        assert np.array_equal(random_density(3, 7).mat, random_density(3, 7).mat)
        assert np.array_equal(states.random_pure(5, 7), states.random_pure(5, 7))
        assert not np.array_equal(random_density(3, 7).mat, random_density(3, 8).mat)

    def test_valid(self, rng):
        for dim in (2, 5, 9):
            DensityMatrix(random_density(dim, rng).mat)
            DensityMatrix(random_bipartite(2, dim, rng).mat)

    def test_ginibre_qubit_eigenvalue_means(self):
        # Ginibre qubit states are uniform in the Bloch ball, so the Bloch
        # radius r has density 3r^2 and E[r] = 3/4; eigenvalues are (1 +- r)/2
        rng = np.random.default_rng(3)
        ev = np.array([np.linalg.eigvalsh(random_density(2, rng).mat)[::-1] for _ in range(1000)])
        assert np.allclose(ev.mean(axis=0), [7 / 8, 1 / 8], atol=0.02)


def test_normalize_and_clip():
    bad = np.diag([1.0 + 1e-9, -1e-9]).astype(complex)
    fixed = states.normalize_and_clip(bad)
    assert np.all(np.linalg.eigvalsh(fixed.mat) >= 0)
    assert abs(np.trace(fixed.mat) - 1) < 1e-15
    with pytest.raises(InvalidState):
        states.normalize_and_clip(np.diag([1.5, -0.5]))


def test_mixture_validation():
    with pytest.raises(InvalidState):
        states.mixture([0.5, 0.6], [np.eye(2) / 2, np.eye(2) / 2])
