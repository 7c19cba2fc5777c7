"""Unitary evolution of total states and reduced trace-distance trajectories."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import DimensionMismatch
from .linalg import Propagator, square_matrix, checked_hermitian
from .states import BipartiteState, DensityMatrix, partial_trace_env, trace_distance

UNITARY_TOL = 1e-9
DEFAULT_STEPS = 200


class Evolution:
    """Either continuous evolution under a Hamiltonian or a single gate.

    Build with :meth:`from_hamiltonian` or :meth:`from_gate`. For a
    Hamiltonian the eigendecomposition is computed on first use and reused
    for every later time.
    """

    def __init__(self, *, hamiltonian=None, gate=None, hbar: float = 1.0):
        if (hamiltonian is None) == (gate is None):
            raise ValueError("give exactly one of hamiltonian or gate")
        if hamiltonian is not None:
            self.hamiltonian = checked_hermitian(hamiltonian)
            self.gate = None
        else:
            u = square_matrix(gate)
            dev = float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
            if dev > UNITARY_TOL:
                raise ValueError(f"gate is not unitary: max|U U^dagger - I| = {dev:.3e}")
            self.gate = u
            self.hamiltonian = None
        self.hbar = float(hbar)

    @classmethod
    def from_hamiltonian(cls, h, hbar: float = 1.0) -> "Evolution":
        return cls(hamiltonian=h, hbar=hbar)

    @classmethod
    def from_gate(cls, u) -> "Evolution":
        return cls(gate=u)

    @property
    def is_gate(self) -> bool:
        return self.gate is not None

    @property
    def dim(self) -> int:
        return (self.gate if self.is_gate else self.hamiltonian).shape[0]

    @cached_property
    def propagator(self) -> Propagator:
        return Propagator(self.hamiltonian, self.hbar)

    def unitary(self, t: float = 0.0) -> np.ndarray:
        """The evolution operator at time ``t``; ``t`` is ignored for gates."""
        if self.is_gate:
            return self.gate
        return self.propagator.at(t)

    def __repr__(self):
        kind = "gate" if self.is_gate else "hamiltonian"
        return f"Evolution({kind}, dim={self.dim})"


@dataclass(frozen=True)
class TimeGrid:
    """``steps`` uniform intervals on ``[t_start, t_end]`` (``steps + 1`` points)."""

    t_end: float
    steps: int = DEFAULT_STEPS
    t_start: float = 0.0

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must be greater than t_start")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.steps

    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps + 1)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    d_values: np.ndarray
    sigma_values: np.ndarray
    dt: float
    # True where sigma came from a one-sided difference (grid endpoints)
    one_sided: np.ndarray = field(repr=False)

    @property
    def is_gate(self) -> bool:
        return bool(np.all(np.isnan(self.sigma_values)))

    def __len__(self):
        return len(self.times)


def _check_dims(rho: BipartiteState, ev: Evolution):
    if rho.dim != ev.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} != evolution dimension {ev.dim}")


def evolve_total(rho: BipartiteState, ev: Evolution, t: float = 0.0) -> BipartiteState:
    """``U rho U^dagger`` with ``U = exp(-iHt/hbar)`` or the fixed gate."""
    _check_dims(rho, ev)
    u = ev.unitary(t)
    out = u @ rho.mat @ u.conj().T
    out = 0.5 * (out + out.conj().T)
    return BipartiteState(DensityMatrix(out, validate=False), rho.dim_s, rho.dim_e)


# largest dim_s^2 * n^2 for which the per-state weight tensor is precomputed
WEIGHT_TENSOR_LIMIT = 1 << 24


class _ReducedEvolver:
    """Reduced state of one total state at arbitrary times.

    In the Hamiltonian eigenbasis the reduced state is a bilinear form in
    the phase vector ``e^{-iwt}``. When the weight tensor of that form
    fits in memory it is built once and each time point costs
    ``O(dim_s^2 n^2)``; otherwise every call does a full ``O(n^3)``
    product.
    """

    def __init__(self, rho: BipartiteState, ev: Evolution):
        spec = ev.propagator.spectrum
        v = spec.eigenvectors
        self.vecs = np.ascontiguousarray(v)
        self.evals = spec.eigenvalues
        self.rho_eig = np.ascontiguousarray(v.conj().T @ rho.mat @ v)
        self.hbar = ev.hbar
        self.dim_s, self.dim_e = rho.dim_s, rho.dim_e
        n = len(self.evals)
        self.weights = None
        if self.dim_s ** 2 * n * n <= WEIGHT_TENSOR_LIMIT:
            blocks = v.reshape(self.dim_s, self.dim_e, n)
            w = np.empty((self.dim_s, self.dim_s, n, n), dtype=np.complex128)
            for i in range(self.dim_s):
                for j in range(self.dim_s):
                    w[i, j] = self.rho_eig * (blocks[i].T @ blocks[j].conj())
            self.weights = w

    def at(self, t: float) -> np.ndarray:
        if self.weights is not None:
            out = _kernels.backend.reduced_from_weights(self.weights, self.evals, float(t), self.hbar)
        else:
            out = _kernels.backend.reduced_evolved(
                self.vecs, self.evals, self.rho_eig, float(t), self.hbar, self.dim_s, self.dim_e
            )
        return 0.5 * (out + out.conj().T)


def reduced_state_at(rho: BipartiteState, ev: Evolution, t: float = 0.0) -> DensityMatrix:
    """``Tr_E[U rho U^dagger]``."""
    _check_dims(rho, ev)
    if ev.is_gate:
        return partial_trace_env(evolve_total(rho, ev))
    return DensityMatrix(_ReducedEvolver(rho, ev).at(t), validate=False)


def distance_trajectory(
    rho1: BipartiteState, rho2: BipartiteState, ev: Evolution, grid: TimeGrid | None = None
) -> Trajectory:
    """Trace distance of the two reduced states over ``grid``.

    A gate evolution gives a two-point trajectory (before, after) at times
    0 and 1 with undefined rate. A Hamiltonian evolution needs a grid.
    """
    if (rho1.dim_s, rho1.dim_e) != (rho2.dim_s, rho2.dim_e):
        raise DimensionMismatch("the two states have different subsystem dimensions")
    _check_dims(rho1, ev)
    if ev.is_gate:
        d0 = trace_distance(partial_trace_env(rho1), partial_trace_env(rho2))
        d1 = trace_distance(reduced_state_at(rho1, ev), reduced_state_at(rho2, ev))
        return Trajectory(
            times=np.array([0.0, 1.0]),
            d_values=np.array([d0, d1]),
            sigma_values=np.full(2, np.nan),
            dt=1.0,
            one_sided=np.ones(2, dtype=bool),
        )
    if grid is None:
        raise ValueError("a Hamiltonian evolution needs a time grid")
    times = grid.times()
    e1, e2 = _ReducedEvolver(rho1, ev), _ReducedEvolver(rho2, ev)
    d = np.array([trace_distance(e1.at(t), e2.at(t)) for t in times])
    sigma = np.gradient(d, grid.dt, edge_order=1)
    one_sided = np.zeros(len(times), dtype=bool)
    one_sided[[0, -1]] = True
    return Trajectory(times=times, d_values=d, sigma_values=sigma, dt=grid.dt, one_sided=one_sided)


def sigma_rate(traj: Trajectory, index: int) -> float:
    """Finite-difference rate of change of the trace distance at one grid point.

    Central difference in the interior, one-sided at the two endpoints.
    Positive values mean distinguishability flowing back into the system.
    """
    n = len(traj.d_values)
    if traj.is_gate:
        raise ValueError("the rate is undefined for gate evolutions")
    if not -n <= index < n:
        raise IndexError(f"index {index} out of range for a trajectory of {n} points")
    index %= n
    d, dt = traj.d_values, traj.dt
    if n == 1:
        return 0.0
    if index == 0:
        return float((d[1] - d[0]) / dt)
    if index == n - 1:
        return float((d[-1] - d[-2]) / dt)
    return float((d[index + 1] - d[index - 1]) / (2.0 * dt))
