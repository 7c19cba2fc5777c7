"""Seeded randomized checks of the trace-distance inequalities.

Each suite returns a list of :class:`Check` records; a suite passes when
every record does. They back both the ``suite`` CLI subcommand and the
acceptance tests.
"""

from dataclasses import dataclass

import numpy as np

from . import models
from .dynamics import Evolution, TimeGrid, distance_trajectory, evolve_total
from .linalg import Propagator
from .states import (
    DensityMatrix,
    partial_trace_env,
    product,
    product_of_marginals,
    random_bipartite,
    random_density,
    trace_distance,
)
from .witness import analyze, bound_set

METRIC_SLACK = 1e-10
DYNAMICS_SLACK = 1e-9

# subsystem splits with total dimension <= 16
SPLITS = [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (4, 4), (2, 8), (8, 2)]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: float
    bound: float
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{mark}] {self.name}: measured={self.measured + 0.0:.6e} bound={self.bound:.6e}{extra}"


def _worst(name: str, excesses, bound: float, detail: str = "") -> Check:
    """Check that every excess (value minus its allowed maximum) is <= bound."""
    worst = float(np.max(excesses)) if len(excesses) else 0.0
    return Check(name, worst <= bound, worst, bound, detail)


def random_hamiltonian(dim: int, rng) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


def random_unitary(dim: int, rng) -> np.ndarray:
    return Propagator(random_hamiltonian(dim, rng)).at(rng.uniform(0.5, 5.0))


def metric(seed: int = 42, cases: int = 500) -> list[Check]:
    """Metric axioms, unitary invariance and data-processing properties."""
    rng = np.random.default_rng(seed)
    nonneg, sym, ident, tri, upper = [], [], [], [], []
    unit, ptrace, tensor, subadd = [], [], [], []
    for _ in range(cases):
        dim = int(rng.integers(1, 7))
        a, b, c = (random_density(dim, rng) for _ in range(3))
        dab, dba = trace_distance(a, b), trace_distance(b, a)
        nonneg.append(-dab)
        sym.append(abs(dab - dba))
        ident.append(trace_distance(a, a))
        tri.append(dab - trace_distance(a, c) - trace_distance(c, b))
        upper.append(dab - 1.0)
        u = random_unitary(dim, rng)
        ua = DensityMatrix(u @ a.mat @ u.conj().T, validate=False)
        ub = DensityMatrix(u @ b.mat @ u.conj().T, validate=False)
        unit.append(abs(trace_distance(ua, ub) - dab))

        ds, de = SPLITS[int(rng.integers(len(SPLITS)))]
        r1, r2 = random_bipartite(ds, de, rng), random_bipartite(ds, de, rng)
        ptrace.append(trace_distance(partial_trace_env(r1), partial_trace_env(r2)) - trace_distance(r1, r2))
        s1, s2 = random_density(ds, rng), random_density(ds, rng)
        e1, e2 = random_density(de, rng), random_density(de, rng)
        ds12 = trace_distance(s1, s2)
        tensor.append(abs(trace_distance(product(s1, e1), product(s2, e1)) - ds12))
        subadd.append(trace_distance(product(s1, e1), product(s2, e2)) - ds12 - trace_distance(e1, e2))
    n = f"{cases} cases"
    return [
        _worst("non-negativity", nonneg, METRIC_SLACK, n),
        _worst("symmetry", sym, METRIC_SLACK, n),
        _worst("identity of indiscernibles", ident, METRIC_SLACK, n),
        _worst("triangle inequality", tri, METRIC_SLACK, n),
        _worst("upper bound 1", upper, METRIC_SLACK, n),
        _worst("unitary invariance", unit, METRIC_SLACK, n),
        _worst("partial-trace monotonicity", ptrace, METRIC_SLACK, n),
        _worst("tensor-factor invariance", tensor, METRIC_SLACK, n),
        _worst("subadditivity", subadd, METRIC_SLACK, n),
    ]


def _product_scenario(rng):
    ds, de = SPLITS[int(rng.integers(len(SPLITS)))]
    env = random_density(de, rng)
    rho1 = product(random_density(ds, rng), env)
    rho2 = product(random_density(ds, rng), env)
    return rho1, rho2, Evolution.from_hamiltonian(random_hamiltonian(ds * de, rng))


def contraction(seed: int = 42, cases: int = 200, times: int = 10) -> list[Check]:
    """Uncorrelated pairs sharing an environment never gain distinguishability."""
    rng = np.random.default_rng(seed)
    excess = []
    for _ in range(cases):
        rho1, rho2, ev = _product_scenario(rng)
        d0 = trace_distance(partial_trace_env(rho1), partial_trace_env(rho2))
        for t in rng.uniform(0.0, 10.0, times):
            s1 = partial_trace_env(evolve_total(rho1, ev, t))
            s2 = partial_trace_env(evolve_total(rho2, ev, t))
            excess.append(trace_distance(s1, s2) - d0)
    violations = int(np.sum(np.asarray(excess) > DYNAMICS_SLACK))
    return [
        _worst(
            "contraction D(t) <= D(0)", excess, DYNAMICS_SLACK,
            f"{cases} scenarios x {times} times, {violations} violations",
        )
    ]


def witness_soundness(seed: int = 42, cases: int = 500, tol: float = 1e-9) -> list[Check]:
    """No false positives on uncorrelated pairs; bound chain on correlated pairs."""
    rng = np.random.default_rng(seed)
    fired = 0
    excess = []
    for _ in range(cases):
        rho1, rho2, ev = _product_scenario(rng)
        grid = TimeGrid(t_end=float(rng.uniform(1.0, 10.0)), steps=20)
        report = analyze(rho1, rho2, ev, grid, tol=tol)
        fired += report.witness_fired
        excess.append(report.max_increase)
    chain = []
    for _ in range(cases):
        ds, de = SPLITS[int(rng.integers(len(SPLITS)))]
        b = bound_set(random_bipartite(ds, de, rng), random_bipartite(ds, de, rng))
        chain.append(b.i_bound - b.triangle_bound)
    return [
        Check("no witness firings on uncorrelated pairs", fired == 0, float(fired), 0.0,
              f"{cases} scenarios, tol={tol:g}, max increase {max(excess):.2e}"),
        _worst("inaccessible info <= correlation+environment bound", chain, METRIC_SLACK,
               f"{cases} correlated pairs"),
    ]


def worked_examples(seed: int = 42, cases: int = 20) -> list[Check]:
    """Replay the CNOT and spin-bath examples with random amplitudes."""
    rng = np.random.default_rng(seed)
    tight, nontight, cls_plain, cls_swap = [], [], [], []
    for _ in range(cases):
        a, b = models.random_amplitudes(rng)
        ab = abs(a * b)
        sc = models.CnotScenario(a, b)
        r1, r2, ev = models.cnot_pair(sc)
        rep = analyze(r1, r2, ev)
        tight.append(max(abs(rep.max_increase - ab), abs(rep.max_increase - rep.bounds.i_bound)))

        rep = analyze(r1, product_of_marginals(r1), ev)
        nontight.append(max(abs(rep.max_increase - ab), abs(rep.bounds.corr1 - (ab + ab ** 2))))

        c1, c2, ev = models.cnot_classical_pair(sc)
        rep = analyze(c1, c2, ev)
        cls_plain.append(max(abs(rep.max_increase), abs(rep.bounds.corr1 - 2 * ab ** 2)))

        c1, c2, ev = models.cnot_classical_pair(models.CnotScenario(a, b, apply_swap=True))
        rep = analyze(c1, c2, ev)
        cls_swap.append(max(abs(rep.max_increase - 2 * ab ** 2), abs(rep.max_increase - rep.bounds.corr1)))

    spin = []
    s = 1 / np.sqrt(2)
    for n_bath in (1, 2, 4):
        sc = models.SpinBathScenario(n_bath, s, s)
        r1, r2, ev = models.spin_bath_pair(sc)
        rep = analyze(r1, r2, ev, sc.default_grid())
        traj = rep.trajectory
        spin.append(np.max(np.abs(traj.d_values - models.spin_bath_analytic(sc, traj.times))))
        spin.append(abs(rep.max_increase - rep.bounds.i_bound))
        spin.append(abs(rep.bounds.i_bound - 0.5))
    n = f"{cases} random amplitude pairs"
    return [
        _worst("CNOT: increase = |ab| = inaccessible info", tight, 1e-12, n),
        _worst("CNOT vs product of marginals: increase |ab|, bound |ab|+|ab|^2", nontight, 1e-12, n),
        _worst("classical state, CNOT only: no increase, correlation 2|ab|^2", cls_plain, 1e-12, n),
        _worst("classical state, swap*CNOT: increase = 2|ab|^2 = correlation", cls_swap, 1e-12, n),
        _worst("spin bath N=1,2,4: analytic match and bound saturation", spin, DYNAMICS_SLACK),
    ]


SUITES = {
    "metric": metric,
    "contraction": contraction,
    "witness-soundness": witness_soundness,
    "paper-examples": worked_examples,
}
