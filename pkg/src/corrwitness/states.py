"""Density matrices, bipartite states and the trace distance.

Composite indices are system-major: the basis vector ``|s>|e>`` sits at
flat index ``s * dim_e + e``.
"""

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, InvalidState, ZeroVector
from .linalg import HERMITIAN_TOL, as_matrix, checked_hermitian, hermitian_eig, hermitian_eigvals

STATE_TOL = 1e-10


class DensityMatrix:
    """A Hermitian, unit-trace, positive semidefinite matrix.

    The constructor validates all three properties to ``tol``. Internal code
    that produces states valid by construction passes ``validate=False``.
    """

    __slots__ = ("mat",)

    def __init__(self, mat, *, validate: bool = True, tol: float = STATE_TOL):
        if validate:
            a = checked_hermitian(mat, HERMITIAN_TOL)
            tr = np.trace(a).real
            if abs(tr - 1.0) > tol:
                raise InvalidState(f"trace is {tr!r}, expected 1")
            lo = hermitian_eigvals(a)[-1]
            if lo < -tol:
                raise InvalidState(f"smallest eigenvalue {lo:.3e} is below -{tol:.0e}")
        else:
            a = np.asarray(mat, dtype=np.complex128)
        a.setflags(write=False)
        self.mat = a

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


class BipartiteState:
    """A density matrix on ``C^dim_s (x) C^dim_e``."""

    __slots__ = ("state", "dim_s", "dim_e")

    def __init__(self, state: DensityMatrix, dim_s: int, dim_e: int):
        if not isinstance(state, DensityMatrix):
            state = DensityMatrix(state)
        dim_s, dim_e = int(dim_s), int(dim_e)
        if dim_s < 1 or dim_e < 1 or dim_s * dim_e != state.dim:
            raise DimensionMismatch(
                f"subsystem dims {dim_s}x{dim_e} do not match state dimension {state.dim}"
            )
        self.state = state
        self.dim_s = dim_s
        self.dim_e = dim_e

    @property
    def mat(self) -> np.ndarray:
        return self.state.mat

    @property
    def dim(self) -> int:
        return self.state.dim

    def __repr__(self):
        return f"BipartiteState(dim_s={self.dim_s}, dim_e={self.dim_e})"


def _mat(x) -> np.ndarray:
    if isinstance(x, (DensityMatrix, BipartiteState)):
        return x.mat
    return as_matrix(x)


def from_pure(v) -> DensityMatrix:
    """``|v><v| / <v|v>``."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    norm2 = float(np.vdot(v, v).real)
    if not norm2 > 0.0:
        raise ZeroVector("cannot build a state from the zero vector")
    return DensityMatrix(np.outer(v, v.conj()) / norm2, validate=False)


def mixture(weights, states) -> DensityMatrix:
    """Convex combination of valid states."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > STATE_TOL:
        raise InvalidState("mixture weights must be non-negative and sum to 1")
    mats = [_mat(s) for s in states]
    if len({m.shape for m in mats}) != 1:
        raise DimensionMismatch("mixture components have different dimensions")
    return DensityMatrix(sum(w * m for w, m in zip(weights, mats)), validate=False)


def partial_trace_env(rho: BipartiteState) -> DensityMatrix:
    out = _kernels.backend.partial_trace_env(np.ascontiguousarray(rho.mat), rho.dim_s, rho.dim_e)
    return DensityMatrix(out, validate=False)


def partial_trace_sys(rho: BipartiteState) -> DensityMatrix:
    out = _kernels.backend.partial_trace_sys(np.ascontiguousarray(rho.mat), rho.dim_s, rho.dim_e)
    return DensityMatrix(out, validate=False)


def product(s: DensityMatrix, e: DensityMatrix) -> BipartiteState:
    return BipartiteState(DensityMatrix(np.kron(s.mat, e.mat), validate=False), s.dim, e.dim)


def product_of_marginals(rho: BipartiteState) -> BipartiteState:
    """The uncorrelated state built from both marginals of ``rho``."""
    return product(partial_trace_env(rho), partial_trace_sys(rho))


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``, via the eigenvalues of the difference."""
    ma, mb = _mat(a), _mat(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"states have shapes {ma.shape} and {mb.shape}")
    diff = ma - mb
    diff = 0.5 * (diff + diff.conj().T)
    return 0.5 * float(np.sum(np.abs(hermitian_eigvals(diff))))


def normalize_and_clip(mat, tol: float = 1e-8) -> DensityMatrix:
    """Repair a slightly degraded state.

    Symmetrizes, clips negative eigenvalues to zero and renormalizes the
    trace. Refuses anything further than ``tol`` from a valid state, since
    larger defects point to a bug rather than round-off.
    """
    a = as_matrix(mat)
    spec = hermitian_eig(0.5 * (a + a.conj().T), tol=max(tol, HERMITIAN_TOL))
    w = spec.eigenvalues
    if w.min() < -tol or abs(w.sum() - 1.0) > tol:
        raise InvalidState("matrix is too far from a density matrix to repair")
    w = np.clip(w, 0.0, None)
    w /= w.sum()
    v = spec.eigenvectors
    return DensityMatrix((v * w) @ v.conj().T, validate=False)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure(dim: int, rng_seed=None) -> np.ndarray:
    """Unit vector with a Haar-random direction."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = _rng(rng_seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng_seed=None) -> DensityMatrix:
    """``G G^dagger / Tr(G G^dagger)`` with standard complex Gaussian ``G``."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = _rng(rng_seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real, validate=False)


def random_bipartite(dim_s: int, dim_e: int, rng_seed=None) -> BipartiteState:
    """Generic correlated state: marginal of a random tripartite pure state.

    The purifying factor has dimension ``dim_s * dim_e``, so the resulting
    state has full rank almost surely.
    """
    rng = _rng(rng_seed)
    n = dim_s * dim_e
    psi = random_pure(n * n, rng).reshape(n, n)
    m = psi @ psi.conj().T
    return BipartiteState(DensityMatrix(0.5 * (m + m.conj().T), validate=False), dim_s, dim_e)
