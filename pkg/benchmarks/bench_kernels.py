"""Benchmark: compiled simulation kernel against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``.  The state-space recursion
dominates simulation and every estimator iteration, which is why it is the
one compiled hot spot.
"""

import time

import numpy as np

from netinform._kernels import BACKEND, pure

try:
    from netinform._kernels import _core
except ImportError:
    _core = None


def bench(impl, A, B, C, D, u, x0, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.ss_sim(A, B, C, D, u, x0)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"active backend: {BACKEND}")
    print(f"{'states':>7} {'T':>8} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for n, T in [(4, 4096), (8, 16384), (16, 65536), (32, 65536)]:
        A = rng.uniform(-0.8, 0.8, (n, n)) / n  # contraction, stays finite
        B = rng.standard_normal((n, 3))
        C = rng.standard_normal((2, n))
        D = rng.standard_normal((2, 3))
        u = np.ascontiguousarray(rng.standard_normal((T, 3)))
        x0 = np.zeros(n)
        t_pure = bench(pure, A, B, C, D, u, x0)
        if _core is not None:
            t_comp = bench(_core, A, B, C, D, u, x0)
            y1 = pure.ss_sim(A, B, C, D, u, x0)
            y2 = _core.ss_sim(A, B, C, D, u, x0)
            assert np.allclose(y1, y2, atol=1e-12), "backends disagree"
            print(f"{n:>7} {T:>8} {t_pure * 1e3:>12.2f} {t_comp * 1e3:>14.2f} "
                  f"{t_pure / t_comp:>8.1f}x")
        else:
            print(f"{n:>7} {T:>8} {t_pure * 1e3:>12.2f} {'n/a':>14} {'n/a':>8}")


if __name__ == "__main__":
    main()
