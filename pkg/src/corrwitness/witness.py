"""Bounds on the growth of reduced-state distinguishability and the
correlation witness built on them."""

from dataclasses import dataclass

import numpy as np

from .dynamics import Evolution, TimeGrid, Trajectory, distance_trajectory
from .errors import BoundViolation, DimensionMismatch
from .states import (
    BipartiteState,
    partial_trace_env,
    partial_trace_sys,
    product_of_marginals,
    trace_distance,
)

WITNESS_TOL = 1e-9


def _same_split(rho1: BipartiteState, rho2: BipartiteState):
    if (rho1.dim_s, rho1.dim_e) != (rho2.dim_s, rho2.dim_e):
        raise DimensionMismatch(
            f"subsystem dims differ: {rho1.dim_s}x{rho1.dim_e} vs {rho2.dim_s}x{rho2.dim_e}"
        )


def inaccessible_information(rho1: BipartiteState, rho2: BipartiteState) -> float:
    """Total-state trace distance minus system-marginal trace distance.

    Non-negative because the partial trace cannot increase the trace
    distance; round-off below zero is clamped.
    """
    _same_split(rho1, rho2)
    d_total = trace_distance(rho1, rho2)
    d_sys = trace_distance(partial_trace_env(rho1), partial_trace_env(rho2))
    return max(d_total - d_sys, 0.0)


def correlation_measure(rho: BipartiteState) -> float:
    """Trace distance between ``rho`` and the product of its marginals."""
    return trace_distance(rho, product_of_marginals(rho))


def triangle_bound(rho1: BipartiteState, rho2: BipartiteState) -> float:
    """Correlations of both states plus the distance of their environment marginals.

    Upper-bounds :func:`inaccessible_information`, and therefore any growth
    of the reduced trace distance.
    """
    _same_split(rho1, rho2)
    env = trace_distance(partial_trace_sys(rho1), partial_trace_sys(rho2))
    return correlation_measure(rho1) + correlation_measure(rho2) + env


@dataclass(frozen=True)
class BoundSet:
    d0: float
    i_bound: float
    triangle_bound: float
    corr1: float
    corr2: float
    env_dist: float

    def as_dict(self) -> dict:
        """Report-schema view; the triangle bound is published as ``eq6_bound``."""
        return {
            "d0": float(self.d0),
            "i_bound": float(self.i_bound),
            "eq6_bound": float(self.triangle_bound),
            "corr1": float(self.corr1),
            "corr2": float(self.corr2),
            "env_dist": float(self.env_dist),
        }


def bound_set(rho1: BipartiteState, rho2: BipartiteState) -> BoundSet:
    _same_split(rho1, rho2)
    d_total = trace_distance(rho1, rho2)
    d0 = trace_distance(partial_trace_env(rho1), partial_trace_env(rho2))
    corr1 = correlation_measure(rho1)
    corr2 = correlation_measure(rho2)
    env = trace_distance(partial_trace_sys(rho1), partial_trace_sys(rho2))
    return BoundSet(
        d0=d0,
        i_bound=max(d_total - d0, 0.0),
        triangle_bound=corr1 + corr2 + env,
        corr1=corr1,
        corr2=corr2,
        env_dist=env,
    )


@dataclass(frozen=True)
class WitnessReport:
    bounds: BoundSet
    trajectory: Trajectory
    max_increase: float
    witness_fired: bool
    first_firing_time: float | None
    bound_saturated: bool
    tol: float

    def firing_flags(self) -> np.ndarray:
        """Per grid point: did D(t) exceed D(0) by more than the tolerance."""
        return self.trajectory.d_values > self.bounds.d0 + self.tol


def analyze(
    rho1: BipartiteState,
    rho2: BipartiteState,
    ev: Evolution,
    grid: TimeGrid | None = None,
    tol: float = WITNESS_TOL,
) -> WitnessReport:
    """Evolve both states, track the reduced trace distance and test it against the bounds.

    The witness fires when the reduced trace distance rises above its
    initial value by more than ``tol``. A firing certifies initial
    correlations only if the environment marginals agree (see
    ``bounds.env_dist``); no firing certifies nothing.

    Raises:
        BoundViolation: some ``D(t) - D(0)`` exceeds the inaccessible
            information by more than ``10 * tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _same_split(rho1, rho2)
    bounds = bound_set(rho1, rho2)
    traj = distance_trajectory(rho1, rho2, ev, grid)
    increase = traj.d_values - bounds.d0
    worst = int(np.argmax(increase))
    if increase[worst] > bounds.i_bound + 10 * tol:
        raise BoundViolation(
            f"D(t) - D(0) = {increase[worst]:.3e} at t = {traj.times[worst]:.6g} exceeds "
            f"the inaccessible information {bounds.i_bound:.3e}"
        )
    max_increase = float(max(increase.max(), 0.0))
    fired = np.flatnonzero(increase > tol)
    return WitnessReport(
        bounds=bounds,
        trajectory=traj,
        max_increase=max_increase,
        witness_fired=bool(max_increase > tol),
        first_firing_time=float(traj.times[fired[0]]) if fired.size else None,
        bound_saturated=bool(abs(max_increase - bounds.i_bound) < tol),
        tol=tol,
    )
