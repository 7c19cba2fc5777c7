import math

import numpy as np
import pytest

from corrwitness import models, witness
from corrwitness.dynamics import Evolution, TimeGrid
from corrwitness.errors import BoundViolation, DimensionMismatch
from corrwitness.states import (
    product,
    product_of_marginals,
    random_bipartite,
    random_density,
    trace_distance,
)
from corrwitness.witness import (
    analyze,
    bound_set,
    correlation_measure,
    triangle_bound,
    inaccessible_information,
)

from conftest import random_hermitian

S = 1 / math.sqrt(2)
AMPLITUDES = [(S, S), (0.6, 0.8), (0.6j, 0.8), (0.3 + 0.4j, math.sqrt(0.75))]


def _shared_env_pair(rng, ds=2, de=3):
    env = random_density(de, rng)
    return product(random_density(ds, rng), env), product(random_density(ds, rng), env)


class TestInaccessibleInformation:
    def test_product_shared_env(self, rng):
        assert inaccessible_information(*_shared_env_pair(rng)) < 1e-12

    @pytest.mark.parametrize("a,b", AMPLITUDES)
    def test_cnot_pair(self, a, b):
        rho1, rho2, _ = models.cnot_pair(models.CnotScenario(a, b))
        assert abs(inaccessible_information(rho1, rho2) - abs(a * b)) < 1e-14

    def test_balanced_value(self):
        rho1, rho2, _ = models.cnot_pair(models.CnotScenario(S, S))
        assert abs(inaccessible_information(rho1, rho2) - 0.5) < 1e-14

    def test_non_negative(self, rng):
        for _ in range(50):
            assert inaccessible_information(random_bipartite(2, 2, rng), random_bipartite(2, 2, rng)) >= 0

    def test_split_mismatch(self, rng):
        with pytest.raises(DimensionMismatch):
            inaccessible_information(random_bipartite(2, 3, rng), random_bipartite(3, 2, rng))


class TestCorrelationMeasure:
    def test_product(self, rng):
        assert correlation_measure(product(random_density(2, rng), random_density(4, rng))) < 1e-12

    @pytest.mark.parametrize("a,b", AMPLITUDES)
    def test_cnot_states(self, a, b):
        ab = abs(a * b)
        rho1, rho2, _ = models.cnot_pair(models.CnotScenario(a, b))
        assert abs(correlation_measure(rho1) - (ab + ab ** 2)) < 1e-14
        assert abs(correlation_measure(rho2) - 2 * ab ** 2) < 1e-14

    def test_positive_for_generic_state(self, rng):
        assert correlation_measure(random_bipartite(2, 2, rng)) > 1e-3


class TestTriangleBound:
    def test_shared_env(self, rng):
        assert triangle_bound(*_shared_env_pair(rng)) < 1e-12

    def test_different_env(self, rng):
        e1, e2 = random_density(3, rng), random_density(3, rng)
        rho1 = product(random_density(2, rng), e1)
        rho2 = product(random_density(2, rng), e2)
        assert abs(triangle_bound(rho1, rho2) - trace_distance(e1, e2)) < 1e-12

    @pytest.mark.parametrize("a,b", AMPLITUDES)
    def test_cnot_pair(self, a, b):
        ab = abs(a * b)
        rho1, rho2, _ = models.cnot_pair(models.CnotScenario(a, b))
        assert abs(triangle_bound(rho1, rho2) - (ab + ab ** 2 + 2 * ab ** 2)) < 1e-14

    def test_chain_on_random_pairs(self, rng):
        for _ in range(100):
            b = bound_set(random_bipartite(2, 3, rng), random_bipartite(2, 3, rng))
            assert b.i_bound <= b.triangle_bound + 1e-10
            for v in b.as_dict().values():
                assert -1e-12 <= v <= 3


class TestAnalyze:
    def test_uncorrelated_never_fires(self, rng):
        for _ in range(20):
            rho1, rho2 = _shared_env_pair(rng)
            ev = Evolution.from_hamiltonian(random_hermitian(6, rng))
            rep = analyze(rho1, rho2, ev, TimeGrid(t_end=5.0, steps=50))
            assert not rep.witness_fired
            assert rep.first_firing_time is None

    @pytest.mark.parametrize("a,b", AMPLITUDES)
    def test_cnot_fires_and_saturates(self, a, b):
        rho1, rho2, ev = models.cnot_pair(models.CnotScenario(a, b))
        rep = analyze(rho1, rho2, ev)
        assert rep.witness_fired and rep.bound_saturated
        assert rep.first_firing_time == 1.0
        assert abs(rep.max_increase - abs(a * b)) < 1e-14

    def test_cnot_against_product_is_not_tight(self):
        a, b = 0.6, 0.8
        rho1, _, ev = models.cnot_pair(models.CnotScenario(a, b))
        rep = analyze(rho1, product_of_marginals(rho1), ev)
        assert rep.witness_fired and not rep.bound_saturated
        assert abs(rep.max_increase - 0.48) < 1e-14
        assert abs(rep.bounds.i_bound - (0.48 + 0.48 ** 2)) < 1e-14

    def test_classical_one_sided(self):
        rho2, prod, ev = models.cnot_classical_pair(models.CnotScenario(0.6, 0.8))
        rep = analyze(rho2, prod, ev)
        assert not rep.witness_fired
        assert rep.bounds.corr1 > 0.4

    def test_classical_with_swap_saturates(self):
        rho2, prod, ev = models.cnot_classical_pair(models.CnotScenario(0.6, 0.8, apply_swap=True))
        rep = analyze(rho2, prod, ev)
        assert rep.witness_fired and rep.bound_saturated
        assert abs(rep.max_increase - 2 * 0.48 ** 2) < 1e-14
        assert abs(rep.max_increase - rep.bounds.corr1) < 1e-14

    def test_first_firing_time(self):
        sc = models.SpinBathScenario(1, S, S)
        rho1, rho2, ev = models.spin_bath_pair(sc)
        rep = analyze(rho1, rho2, ev, sc.default_grid())
        assert rep.first_firing_time == pytest.approx(sc.default_grid().dt)
        flags = rep.firing_flags()
        assert not flags[0] and flags[1]

    def test_violation_detected(self, monkeypatch):
        rho1, rho2, ev = models.cnot_pair(models.CnotScenario(S, S))
        real = witness.bound_set

        def broken(r1, r2):
            b = real(r1, r2)
            return witness.BoundSet(b.d0, 0.0, b.triangle_bound, b.corr1, b.corr2, b.env_dist)

        monkeypatch.setattr(witness, "bound_set", broken)
        with pytest.raises(BoundViolation):
            analyze(rho1, rho2, ev)

    def test_tolerance_must_be_positive(self, rng):
        rho1, rho2 = _shared_env_pair(rng)
        with pytest.raises(ValueError):
            analyze(rho1, rho2, Evolution.from_gate(np.eye(6)), tol=0.0)

    def test_product_partner_bound_on_random_states(self, rng):
        for _ in range(20):
            rho = random_bipartite(2, 2, rng)
            ev = Evolution.from_hamiltonian(random_hermitian(4, rng))
            rep = analyze(rho, product_of_marginals(rho), ev, TimeGrid(t_end=6.0, steps=60))
            assert np.all(rep.trajectory.d_values <= correlation_measure(rho) + 1e-9)
