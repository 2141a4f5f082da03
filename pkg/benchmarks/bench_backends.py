#!/usr/bin/env python3
"""Timing comparison of the numba and numpy kernel backends.

Runs the two hot kernels (flume right-hand side, reservoir stepping) through
both implementations and reports the per-call duration.  Smaller is better.
"""

import timeit

import numpy as np

from wavecho.kernels import numpy_backend

try:
    from wavecho.kernels import numba_backend
except ImportError:
    numba_backend = None

BACKENDS = {"numpy": numpy_backend}
if numba_backend is not None:
    BACKENDS["numba"] = numba_backend


def flume_args(n=800, seed=0):
    rng = np.random.default_rng(seed)
    x = (np.arange(n) + 0.5) * 5.0
    h = np.clip(30.0 - np.maximum(x - 1000.0, 0.0) / 100.0, 5.0, 30.0)
    h_face = np.clip(30.0 - np.maximum(np.arange(n + 1) * 5.0 - 1000.0, 0.0) / 100.0,
                     5.0, 30.0)
    eta = 0.4 * np.sin(2 * np.pi * x / 140.0)
    u = 0.3 * np.sin(2 * np.pi * x / 140.0 + 0.5)
    big_h = h + eta
    k = np.abs(0.01 * rng.normal(size=n))
    h_x = np.gradient(h, 5.0)
    z = -0.531 * h
    p = numpy_backend.momentum_from_velocity(big_h, u, h, z, 5.0)
    wmk = np.zeros(n)
    return (big_h, p, u, k, h, h_face, h_x, z, 5.0, 9.81,
            0.025, 0.55, 1e-6, wmk, True, True, True)


def reservoir_args(n=128, m=32, steps=900, seed=1):
    rng = np.random.default_rng(seed)
    w = rng.uniform(-0.1, 0.1, (n, n))
    d = rng.uniform(-1.0, 1.0, (n, m))
    beta = rng.uniform(-0.5, 0.5, n)
    x0 = np.zeros(n)
    inputs = rng.normal(size=(steps, m))
    return (w, d, beta, x0, inputs, 0.5, 0.7, 1.0, True)


def bench(label, calls, repeats=5):
    print(f"{label}:")
    for name, backend in BACKENDS.items():
        fn, args, number = calls(backend)
        fn(*args)  # warm up (JIT compile for numba)
        best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeats))
        print(f"  {name:>6}: {1e3 * best / number:9.3f} ms/call")
    print()


def main():
    print("Per-call duration of the hot kernels, best of 5. Smaller is better.\n")
    f_args = flume_args()
    bench("flume_rhs (800 cells)",
          lambda backend: (backend.flume_rhs, f_args, 100))
    r_args = reservoir_args()
    bench("reservoir_run (N=128, M=32, 900 steps)",
          lambda backend: (backend.reservoir_run, r_args, 5))


if __name__ == "__main__":
    main()
