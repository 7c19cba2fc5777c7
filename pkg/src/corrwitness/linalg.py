"""Dense complex matrix layer.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The helpers
here add the shape/finiteness checks the rest of the package relies on and
a Hermitian eigensolver with deterministic output ordering.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DimensionTooLarge,
    NotHermitian,
)

HERMITIAN_TOL = 1e-10
MAX_DIM = 4096


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def square_matrix(m) -> np.ndarray:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionTooLarge(f"dimension {a.shape[0]} exceeds the dense limit {MAX_DIM}")
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T.copy()


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def add(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot add {a.shape} and {b.shape}")
    return a + b


def scale(m, c: complex) -> np.ndarray:
    return complex(c) * as_matrix(m)


def trace(m) -> complex:
    return complex(np.trace(square_matrix(m)))


def frobenius_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def hermitian_deviation(m) -> float:
    """Largest entry of ``|m - m^dagger|``."""
    a = as_matrix(m)
    return float(np.max(np.abs(a - a.conj().T)))


def checked_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` after checking ``m`` is Hermitian within ``tol``."""
    a = square_matrix(m)
    dev = hermitian_deviation(a)
    if dev > tol:
        raise NotHermitian(f"max |m - m^dagger| = {dev:.3e} exceeds {tol:.1e}")
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _fix_phases(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    mags = np.abs(v)
    for j in range(v.shape[1]):
        nz = np.flatnonzero(mags[:, j] > 1e-12)
        if nz.size:
            z = v[nz[0], j]
            v[:, j] *= np.conj(z) / abs(z)
    return v


def _ordered(w: np.ndarray, v: np.ndarray) -> Spectrum:
    v = _fix_phases(v)
    order = list(np.argsort(-w, kind="stable"))
    tie = 1e-12 * max(1.0, float(np.max(np.abs(w))))
    out = []
    i = 0
    # within a cluster of equal eigenvalues, order by the phase-fixed vector
    while i < len(order):
        j = i + 1
        while j < len(order) and w[order[i]] - w[order[j]] <= tie:
            j += 1
        cluster = order[i:j]
        if len(cluster) > 1:
            def key(k):
                col = np.round(v[:, k], 12)
                return tuple(np.column_stack([col.real, col.imag]).ravel())
            cluster = sorted(cluster, key=key, reverse=True)
        out.extend(cluster)
        i = j
    idx = np.array(out, dtype=int)
    return Spectrum(eigenvalues=w[idx].copy(), eigenvectors=v[:, idx])


def _budget(n: int) -> int:
    return 100 * n * n


def _run_eigh(a: np.ndarray, want_vectors: bool):
    w, v, _, status = _kernels.backend.eigh(np.ascontiguousarray(a), _budget(a.shape[0]), want_vectors)
    if status != _kernels.OK:
        raise ConvergenceFailure(
            f"eigensolver exceeded {_budget(a.shape[0])} iterations on a {a.shape[0]}x{a.shape[0]} matrix"
        )
    return np.asarray(w, dtype=float), v


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back in descending order. Each eigenvector is scaled so
    its first non-negligible component is real and positive, and degenerate
    eigenvectors are ordered lexicographically, so the output is reproducible.

    Raises:
        NotHermitian: ``max|m - m^dagger| > tol``.
        ConvergenceFailure: the iteration budget of ``100 n^2`` ran out.
    """
    a = checked_hermitian(m, tol)
    w, v = _run_eigh(a, True)
    return _ordered(w, v)


def hermitian_eigvals(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Descending eigenvalues only; cheaper than :func:`hermitian_eig` on large inputs."""
    a = checked_hermitian(m, tol)
    w, _ = _run_eigh(a, False)
    return np.sort(w)[::-1]


def expm_propagator(h, t: float, hbar: float = 1.0) -> np.ndarray:
    """``exp(-i h t / hbar)`` through the eigendecomposition of ``h``."""
    return Propagator(h, hbar).at(t)


class Propagator:
    """Diagonalizes a Hamiltonian once and exponentiates it at any time."""

    def __init__(self, h, hbar: float = 1.0):
        if not hbar > 0:
            raise ValueError("hbar must be positive")
        self.spectrum = hermitian_eig(h)
        self.hbar = float(hbar)

    @property
    def dim(self) -> int:
        return self.spectrum.eigenvalues.shape[0]

    def phases(self, t: float) -> np.ndarray:
        return np.exp(-1j * self.spectrum.eigenvalues * (t / self.hbar))

    def at(self, t: float) -> np.ndarray:
        v = self.spectrum.eigenvectors
        return (v * self.phases(t)) @ v.conj().T
