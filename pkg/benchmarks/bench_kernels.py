"""Time the numba kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--n-bath 8]

Both kernel sets are always importable; the benchmark swaps
``corrwitness._kernels.backend`` directly instead of using the
environment flag.
"""

import argparse
import math
import time

import numpy as np

from corrwitness import _kernels, models
from corrwitness.dynamics import _ReducedEvolver, distance_trajectory
from corrwitness.linalg import MAX_DIM


def best_of(fn, repeat):
    fn()  # warm-up (JIT compilation, caches)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def random_hermitian(n, rng):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n-bath", type=int, default=8)
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 256, 512])
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    kernel_sets = {"numba": _kernels.numba_kernels, "numpy": _kernels.numpy_kernels}
    rows = []

    for n in args.sizes:
        if n > MAX_DIM:
            continue
        h = random_hermitian(n, rng)
        for name, k in kernel_sets.items():
            rows.append((f"eigh n={n}", name, best_of(lambda: k.eigh(h, 100 * n * n, True), args.repeat)))

    sc = models.SpinBathScenario(args.n_bath, 1 / math.sqrt(2), 1 / math.sqrt(2))
    rho1, rho2, ev = models.spin_bath_pair(sc)
    mat = np.ascontiguousarray(rho1.mat)
    for name, k in kernel_sets.items():
        rows.append((f"partial trace dim={rho1.dim}", name,
                     best_of(lambda: k.partial_trace_env(mat, rho1.dim_s, rho1.dim_e), args.repeat)))

    ev.propagator  # diagonalize once, outside the timed regions
    evolver = _ReducedEvolver(rho1, ev)
    for name, k in kernel_sets.items():
        rows.append((f"reduced state, one time, N={args.n_bath}", name,
                     best_of(lambda: k.reduced_from_weights(evolver.weights, evolver.evals, 0.3, 1.0),
                             args.repeat)))

    grid = sc.default_grid()
    saved = _kernels.backend
    try:
        for name, k in kernel_sets.items():
            _kernels.backend = k
            rows.append((f"trajectory N={args.n_bath}, {grid.steps} steps", name,
                         best_of(lambda: distance_trajectory(rho1, rho2, ev, grid), args.repeat)))
    finally:
        _kernels.backend = saved

    width = max(len(r[0]) for r in rows)
    print(f"{'benchmark':<{width}}  {'numba [s]':>12}  {'numpy [s]':>12}  {'speedup':>8}")
    for i in range(0, len(rows), 2):
        label, _, t_nb = rows[i]
        _, _, t_np = rows[i + 1]
        print(f"{label:<{width}}  {t_nb:12.5f}  {t_np:12.5f}  {t_np / t_nb:8.2f}")


if __name__ == "__main__":
    main()
