"""Time the hot kernels under the numba and numpy backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--scale S]

Each kernel runs once untimed (JIT compilation for numba), then the best of
``--repeat`` timed runs is reported.  Inputs are shaped like the work the
pipeline does on the synthetic corpus: binary rows over a few dozen selected
terms, a few hundred merged rows for SVM training, one SGD epoch.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from intentminer import kernels


def best_time(fn, repeat: int) -> float:
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(scale: float, rng: np.random.Generator):
    n_rows = int(5000 * scale)
    d = 50
    X = (rng.random((n_rows, d)) < 0.1).astype(np.float64)
    y = (rng.random(n_rows) < 0.58).astype(np.int64)
    w = np.ones(n_rows)
    rows = np.arange(n_rows, dtype=np.int64)

    n_sv = int(400 * scale)
    Xs = (rng.random((n_sv, d)) < 0.1).astype(np.float64)
    ys = np.where(rng.random(n_sv) < 0.58, 1.0, -1.0)
    ub = rng.integers(1, 20, size=n_sv).astype(np.float64)

    h1 = h2 = 100
    net = [rng.uniform(-0.2, 0.2, (h1, d)), np.zeros(h1), rng.uniform(-0.17, 0.17, (h2, h1)),
           np.zeros(h2), rng.uniform(-0.24, 0.24, h2), np.zeros(1)]
    order = rng.permutation(n_rows).astype(np.int64)
    target = y.astype(np.float64)

    def smo_case(impl):
        K = impl.rbf_gram(Xs, Xs, 1.0)

        def run():
            impl.smo_solve(K, ys, ub, 1e-3, 100000, np.zeros(n_sv), -np.ones(n_sv))
        return run

    def sgd_case(impl):
        def run():
            weights = [a.copy() for a in net]
            impl.sgd_epoch(*weights, X, target, order, 0.1)
        return run

    return {
        "rbf_gram": lambda impl: (lambda: impl.rbf_gram(Xs, Xs, 1.0)),
        "smo_solve": smo_case,
        "best_split": lambda impl: (lambda: impl.best_split(X, y, w, rows)),
        "sgd_epoch": sgd_case,
        "mlp_forward": lambda impl: (lambda: impl.mlp_forward(*net, X)),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--scale", type=float, default=1.0, help="multiplies the problem sizes")
    args = parser.parse_args(argv)
    backends = {"numpy": kernels.numpy_backend}
    if kernels.numba_backend is not None:
        backends["numba"] = kernels.numba_backend
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<12} " + " ".join(f"{name + ' (ms)':>12}" for name in backends) + f"{'speedup':>10}")
    for name, make in cases(args.scale, np.random.default_rng(0)).items():
        timings = {b: best_time(make(impl), args.repeat) * 1e3 for b, impl in backends.items()}
        cells = " ".join(f"{timings[b]:>12.2f}" for b in backends)
        speedup = f"{timings['numpy'] / timings['numba']:>9.1f}x" if "numba" in timings else ""
        print(f"{name:<12} {cells}{speedup}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
