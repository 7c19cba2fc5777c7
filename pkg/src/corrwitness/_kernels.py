"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The public modules never import from here directly; they go through
:data:`backend`, which is bound to one of the two kernel sets at import
time (see :mod:`corrwitness._accel`).
"""

import math
from types import SimpleNamespace

import numpy as np

from ._accel import USE_NUMBA, njit

# status codes returned by the Jacobi kernel
OK = 0
NO_CONVERGENCE = 1

JACOBI_MAX_DIM = 32


@njit
def jacobi_eigh(a, max_rotations):
    """Cyclic complex Jacobi on a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors, rotations, status)``. Eigenvalues
    are unsorted; eigenvectors are the columns of the second output.
    """
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = math.sqrt(fro)
    rotations = 0
    status = OK
    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += a[p, q].real ** 2 + a[p, q].imag ** 2
        off = math.sqrt(2.0 * off)
        if off <= 1e-17 * fro:
            break
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                r = abs(g)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # negligible against both diagonal entries: drop it
                if abs(app) + 100.0 * r == abs(app) and abs(aqq) + 100.0 * r == abs(aqq):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                if rotations >= max_rotations:
                    status = NO_CONVERGENCE
                    break
                rotations += 1
                rotated = True
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phase = g / r
                jqp = -s * phase.conjugate()
                jqq = c * phase.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * c + akq * jqp
                    a[k, q] = akp * s + akq * jqq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk + jqp.conjugate() * aqk
                    a[q, k] = s * apk + jqq.conjugate() * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * c + vkq * jqp
                    v[k, q] = vkp * s + vkq * jqq
            if status != OK:
                break
        if status != OK or not rotated:
            break
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, rotations, status


@njit
def tridiag_ql_eigh(a, max_iterations, want_vectors=True):
    """Householder reduction to real tridiagonal form, then implicit-shift QL.

    Same return convention as :func:`jacobi_eigh`; the third output counts
    QL iterations.
    """
    n = a.shape[0]
    a = a.copy()
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = a[k + 1:, k].copy()
        xnorm = math.sqrt(np.sum(x.real ** 2 + x.imag ** 2))
        if xnorm == 0.0:
            continue
        x0 = x[0]
        phase = x0 / abs(x0) if abs(x0) > 0.0 else 1.0 + 0j
        alpha = -phase * xnorm
        vec = x.copy()
        vec[0] -= alpha
        vnorm = math.sqrt(np.sum(vec.real ** 2 + vec.imag ** 2))
        if vnorm == 0.0:
            continue
        vec /= vnorm
        sub = a[k + 1:, k + 1:]
        p = np.dot(np.ascontiguousarray(sub), vec)
        kk = np.vdot(vec, p).real
        w = p - kk * vec
        m = n - k - 1
        for i in range(m):
            vi2 = 2.0 * vec[i]
            wi2 = 2.0 * w[i]
            for j in range(m):
                sub[i, j] -= vi2 * w[j].conjugate() + wi2 * vec[j].conjugate()
        a[k + 1, k] = alpha
        a[k, k + 1] = alpha.conjugate()
        for i in range(k + 2, n):
            a[i, k] = 0.0
            a[k, i] = 0.0
        if want_vectors:
            qv = np.dot(np.ascontiguousarray(q[:, k + 1:]), vec)
            for i in range(n):
                qv2 = 2.0 * qv[i]
                for j in range(m):
                    q[i, k + 1 + j] -= qv2 * vec[j].conjugate()

    d = np.empty(n)
    e = np.zeros(n)
    phases = np.empty(n, dtype=np.complex128)
    phases[0] = 1.0
    for i in range(n):
        d[i] = a[i, i].real
    for i in range(n - 1):
        off = a[i + 1, i]
        r = abs(off)
        e[i] = r
        phases[i + 1] = phases[i] * (off / r) if r > 0.0 else phases[i]

    # zt holds the real tridiagonal eigenvectors as rows
    zt = np.eye(n)
    iterations = 0
    status = OK
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if iterations >= max_iterations:
                status = NO_CONVERGENCE
                break
            iterations += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if not want_vectors:
                    i -= 1
                    continue
                for k in range(n):
                    f = zt[i + 1, k]
                    zt[i + 1, k] = s * zt[i, k] + c * f
                    zt[i, k] = c * zt[i, k] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
        if status != OK:
            break
    if not want_vectors:
        return d, q, iterations, status
    qd = q * phases
    vecs = np.dot(qd, np.ascontiguousarray(zt.T).astype(np.complex128))
    return d, vecs, iterations, status


@njit
def _nb_eigh(a, budget, want_vectors):
    # Jacobi is the more accurate of the two on small inputs; it is
    # O(n^3) per sweep with poor locality, so large inputs go through QL
    if a.shape[0] <= JACOBI_MAX_DIM:
        return jacobi_eigh(a, budget)
    return tridiag_ql_eigh(a, budget, want_vectors)


def _numpy_eigh(a, budget, want_vectors):
    if not want_vectors:
        return np.linalg.eigvalsh(a), a, 0, OK
    w, v = np.linalg.eigh(a)
    return w, v.astype(np.complex128), 0, OK


@njit
def _nb_partial_trace_env(rho, dim_s, dim_e):
    out = np.zeros((dim_s, dim_s), dtype=np.complex128)
    for i in range(dim_s):
        for j in range(dim_s):
            acc = 0j
            for k in range(dim_e):
                acc += rho[i * dim_e + k, j * dim_e + k]
            out[i, j] = acc
    return out


@njit
def _nb_partial_trace_sys(rho, dim_s, dim_e):
    out = np.zeros((dim_e, dim_e), dtype=np.complex128)
    for s in range(dim_s):
        base = s * dim_e
        for i in range(dim_e):
            for j in range(dim_e):
                out[i, j] += rho[base + i, base + j]
    return out


def _np_partial_trace_env(rho, dim_s, dim_e):
    return np.einsum("ikjk->ij", rho.reshape(dim_s, dim_e, dim_s, dim_e))


def _np_partial_trace_sys(rho, dim_s, dim_e):
    return np.einsum("kikj->ij", rho.reshape(dim_s, dim_e, dim_s, dim_e))


@njit
def _nb_reduced_evolved(vecs, evals, rho_eig, t, hbar, dim_s, dim_e):
    """Tr_E of ``V diag(e^{-iwt}) R diag(e^{iwt}) V^dagger``."""
    n = vecs.shape[0]
    ph = np.empty(n, dtype=np.complex128)
    for a in range(n):
        ph[a] = np.exp(-1j * evals[a] * t / hbar)
    x = np.empty((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            x[a, b] = ph[a] * rho_eig[a, b] * ph[b].conjugate()
    m = np.dot(vecs, x)
    out = np.zeros((dim_s, dim_s), dtype=np.complex128)
    for i in range(dim_s):
        for j in range(dim_s):
            acc = 0j
            for k in range(dim_e):
                ri = i * dim_e + k
                rj = j * dim_e + k
                for b in range(n):
                    acc += m[ri, b] * vecs[rj, b].conjugate()
            out[i, j] = acc
    return out


@njit
def _nb_reduced_from_weights(weights, evals, t, hbar):
    """``out[i, j] = sum_ab ph_a W[i, j, a, b] conj(ph_b)`` with ``ph = e^{-iwt}``."""
    dim_s = weights.shape[0]
    n = evals.shape[0]
    ph = np.empty(n, dtype=np.complex128)
    for a in range(n):
        ph[a] = np.exp(-1j * evals[a] * t / hbar)
    out = np.zeros((dim_s, dim_s), dtype=np.complex128)
    for i in range(dim_s):
        for j in range(i, dim_s):
            acc = 0j
            for a in range(n):
                row = 0j
                for b in range(n):
                    row += weights[i, j, a, b] * ph[b].conjugate()
                acc += ph[a] * row
            out[i, j] = acc
            out[j, i] = acc.conjugate()
    return out


def _np_reduced_from_weights(weights, evals, t, hbar):
    ph = np.exp(-1j * evals * t / hbar)
    return np.einsum("a,ijab,b->ij", ph, weights, ph.conj(), optimize=True)


def _np_reduced_evolved(vecs, evals, rho_eig, t, hbar, dim_s, dim_e):
    n = vecs.shape[0]
    ph = np.exp(-1j * evals * t / hbar)
    m = vecs @ (ph[:, None] * rho_eig * ph.conj()[None, :])
    return np.einsum(
        "ikb,jkb->ij", m.reshape(dim_s, dim_e, n), vecs.conj().reshape(dim_s, dim_e, n)
    )


numba_kernels = SimpleNamespace(
    name="numba",
    eigh=_nb_eigh,
    partial_trace_env=_nb_partial_trace_env,
    partial_trace_sys=_nb_partial_trace_sys,
    reduced_evolved=_nb_reduced_evolved,
    reduced_from_weights=_nb_reduced_from_weights,
)

numpy_kernels = SimpleNamespace(
    name="numpy",
    eigh=_numpy_eigh,
    partial_trace_env=_np_partial_trace_env,
    partial_trace_sys=_np_partial_trace_sys,
    reduced_evolved=_np_reduced_evolved,
    reduced_from_weights=_np_reduced_from_weights,
)

backend = numba_kernels if USE_NUMBA else numpy_kernels
