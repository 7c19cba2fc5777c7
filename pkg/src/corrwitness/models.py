"""Built-in scenarios: the two-qubit CNOT examples and the central-spin bath."""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Evolution, TimeGrid
from .errors import DimensionTooLarge, InvalidAmplitudes, InvalidState
from .states import (
    BipartiteState,
    DensityMatrix,
    from_pure,
    mixture,
    partial_trace_env,
    partial_trace_sys,
    product_of_marginals,
)

NORM_TOL = 1e-12
MAX_BATH = 11
MARGINAL_TOL = 1e-12

# |00>->|00>, |01>->|01>, |10>->|11>, |11>->|10>; first qubit controls
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)
CNOT.setflags(write=False)
SWAP.setflags(write=False)


def _check_amplitudes(alpha: complex, beta: complex):
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > NORM_TOL:
        raise InvalidAmplitudes(f"|alpha|^2 + |beta|^2 = {norm!r}, must be 1")
    if alpha == 0 or beta == 0:
        raise InvalidAmplitudes("alpha and beta must both be nonzero")


@dataclass(frozen=True)
class CnotScenario:
    alpha: complex
    beta: complex
    apply_swap: bool = False

    def __post_init__(self):
        _check_amplitudes(self.alpha, self.beta)

    def evolution(self) -> Evolution:
        return Evolution.from_gate(SWAP @ CNOT if self.apply_swap else CNOT)


def _cnot_states(sc: CnotScenario):
    a, b = complex(sc.alpha), complex(sc.beta)
    entangled = from_pure(np.array([a, 0, 0, b]))
    e00 = np.zeros((4, 4), complex)
    e00[0, 0] = 1
    e11 = np.zeros((4, 4), complex)
    e11[3, 3] = 1
    classical = mixture([abs(a) ** 2, abs(b) ** 2], [e00, e11])
    return BipartiteState(entangled, 2, 2), BipartiteState(classical, 2, 2)


def _assert_marginals(expected: np.ndarray, *states: BipartiteState):
    for rho in states:
        for marg in (partial_trace_env(rho), partial_trace_sys(rho)):
            if np.max(np.abs(marg.mat - expected)) > MARGINAL_TOL:
                raise InvalidState("scenario marginals do not match")


def cnot_pair(sc: CnotScenario):
    """The entangled state ``a|00> + b|11>`` and its dephased twin.

    Returns ``(rho1, rho2, evolution)``. Both states have all four
    marginals equal to ``diag(|a|^2, |b|^2)``, so they differ only in
    their correlations.
    """
    rho1, rho2 = _cnot_states(sc)
    _assert_marginals(np.diag([abs(sc.alpha) ** 2, abs(sc.beta) ** 2]), rho1, rho2)
    return rho1, rho2, sc.evolution()


def cnot_classical_pair(sc: CnotScenario):
    """The classically correlated state and the product of its marginals."""
    _, rho2 = _cnot_states(sc)
    return rho2, product_of_marginals(rho2), sc.evolution()


@dataclass(frozen=True)
class SpinBathScenario:
    """Central spin coupled to ``n_bath`` spins by flip-flop terms of strength ``a0``."""

    n_bath: int
    alpha: complex
    beta: complex
    a0: float = 1.0

    def __post_init__(self):
        if int(self.n_bath) != self.n_bath or self.n_bath < 1:
            raise ValueError("n_bath must be a positive integer")
        if not math.isfinite(self.a0):
            raise ValueError("a0 must be finite")
        _check_amplitudes(self.alpha, self.beta)

    @property
    def coupling(self) -> float:
        """Effective coupling ``sqrt(N) * a0``."""
        return math.sqrt(self.n_bath) * self.a0

    @property
    def period(self) -> float:
        return math.pi / abs(self.coupling)

    def default_grid(self, steps: int = 200) -> TimeGrid:
        """One full period of the analytic trace distance."""
        return TimeGrid(t_end=self.period, steps=steps)


# Spin convention: |+> = (1, 0) is bit 0, |-> = (0, 1) is bit 1.
# The central spin is the most significant bit, bath spin k (1-based) the
# k-th bit after it.


def _bath_bit(n_bath: int, k: int) -> int:
    return 1 << (n_bath - k)


def spin_bath_hamiltonian(n_bath: int, a0: float = 1.0) -> np.ndarray:
    """``a0 * sum_k (s+ s-^(k) + s- s+^(k))`` on ``n_bath + 1`` spins."""
    if n_bath > MAX_BATH:
        raise DimensionTooLarge(f"n_bath={n_bath} exceeds the dense limit of {MAX_BATH}")
    dim = 1 << (n_bath + 1)
    central = 1 << n_bath
    h = np.zeros((dim, dim), dtype=np.complex128)
    idx = np.arange(dim)
    for k in range(1, n_bath + 1):
        bit = _bath_bit(n_bath, k)
        # flip-flop acts only where central and bath spin k are anti-aligned
        anti = ((idx & central) > 0) != ((idx & bit) > 0)
        src = idx[anti]
        h[src ^ central ^ bit, src] = a0
    return h


def _bath_states(n_bath: int):
    dim_e = 1 << n_bath
    chi_plus = np.zeros(dim_e, dtype=np.complex128)
    chi_plus[0] = 1.0
    chi_minus = np.zeros(dim_e, dtype=np.complex128)
    for k in range(1, n_bath + 1):
        chi_minus[_bath_bit(n_bath, k)] = 1.0
    chi_minus *= 1j / math.sqrt(n_bath)
    return chi_plus, chi_minus


def spin_bath_pair(sc: SpinBathScenario):
    """``|Psi> = a|-,chi+> + b|+,chi->`` and its dephased mixture, plus the evolution.

    ``chi+`` has every bath spin up; ``chi-`` is ``i/sqrt(N)`` times the sum
    of the states with exactly one bath spin flipped.
    """
    h = spin_bath_hamiltonian(sc.n_bath, sc.a0)
    up = np.array([1, 0], dtype=np.complex128)
    down = np.array([0, 1], dtype=np.complex128)
    chi_plus, chi_minus = _bath_states(sc.n_bath)
    a, b = complex(sc.alpha), complex(sc.beta)
    first = np.kron(down, chi_plus)
    second = np.kron(up, chi_minus)
    rho1 = from_pure(a * first + b * second)
    rho2 = mixture([abs(a) ** 2, abs(b) ** 2], [from_pure(first), from_pure(second)])
    dim_e = 1 << sc.n_bath
    s1, s2 = BipartiteState(rho1, 2, dim_e), BipartiteState(rho2, 2, dim_e)
    for trace in (partial_trace_env, partial_trace_sys):
        if np.max(np.abs(trace(s1).mat - trace(s2).mat)) > MARGINAL_TOL:
            raise InvalidState("spin-bath states do not share their marginals")
    return s1, s2, Evolution.from_hamiltonian(h)


def spin_bath_analytic(sc: SpinBathScenario, t):
    """Closed-form reduced trace distance ``|Re(a* b) sin(2 A t)|``; vectorized in ``t``."""
    amp = (np.conj(complex(sc.alpha)) * complex(sc.beta)).real
    out = np.abs(amp * np.sin(2.0 * sc.coupling * np.asarray(t, dtype=float)))
    return float(out) if np.ndim(out) == 0 else out


def random_amplitudes(rng) -> tuple[complex, complex]:
    """Random normalized pair with both entries nonzero."""
    while True:
        v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v /= np.linalg.norm(v)
        if abs(v[0]) > 1e-3 and abs(v[1]) > 1e-3:
            return complex(v[0]), complex(v[1])


SCENARIOS = ("cnot", "cnot-swap", "cnot-classical", "spin-bath")
