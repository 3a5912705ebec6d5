import os
import subprocess
import sys

import numpy as np
import pytest

from intentminer import _accel, kernels

NUMBA = kernels.numba_backend
needs_numba = pytest.mark.skipif(NUMBA is None, reason="numba backend not active")
NP = kernels.numpy_backend


def random_net(rng, d=5, h1=4, h2=3):
    return [rng.normal(size=(h1, d)), rng.normal(size=h1), rng.normal(size=(h2, h1)),
            rng.normal(size=h2), rng.normal(size=h2), rng.normal(size=1)]


@needs_numba
class TestBackendEquivalence:
    def test_rbf_gram(self, rng):
        A, B = rng.random((7, 4)), rng.random((5, 4))
        np.testing.assert_allclose(NUMBA.rbf_gram(A, B, 0.8), NP.rbf_gram(A, B, 0.8),
                                   rtol=1e-13, atol=1e-15)

    def test_best_split(self, rng):
        for _ in range(300):
            n, d = int(rng.integers(2, 40)), int(rng.integers(1, 6))
            X = rng.integers(0, 4, size=(n, d)).astype(float)
            y = rng.integers(0, 2, size=n)
            w = rng.integers(1, 4, size=n).astype(float)
            rows = np.sort(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
            a = NUMBA.best_split(X, y, w, rows)
            b = NP.best_split(X, y, w, rows)
            assert (a[0], a[1]) == (b[0], b[1])
            assert a[2] == pytest.approx(b[2], abs=1e-12)

    def test_smo_solve(self, rng):
        for _ in range(40):
            n = int(rng.integers(2, 30))
            X = rng.random((n, 3))
            K = NP.rbf_gram(X, X, 1.0)
            y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
            y[:2] = (1.0, -1.0)
            ub = rng.integers(1, 4, size=n).astype(float)
            states = []
            for impl in (NUMBA, NP):
                alpha, G = np.zeros(n), -np.ones(n)
                it, ok = impl.smo_solve(K, y, ub, 1e-3, 100000, alpha, G)
                states.append((it, ok, alpha, G))
            assert states[0][:2] == states[1][:2]
            np.testing.assert_allclose(states[0][2], states[1][2], rtol=1e-9, atol=1e-12)
            np.testing.assert_allclose(states[0][3], states[1][3], rtol=1e-9, atol=1e-12)

    def test_sgd_epoch(self, rng):
        X = rng.random((25, 5))
        y = (rng.random(25) < 0.5).astype(float)
        order = rng.permutation(25).astype(np.int64)
        net = random_net(rng)
        a = [w.copy() for w in net]
        b = [w.copy() for w in net]
        NUMBA.sgd_epoch(*a, X, y, order, 0.1)
        NP.sgd_epoch(*b, X, y, order, 0.1)
        for wa, wb, w0 in zip(a, b, net):
            np.testing.assert_allclose(wa, wb, rtol=1e-10, atol=1e-13)
            assert not np.array_equal(wa, w0)

    def test_mlp_forward(self, rng):
        X = rng.random((30, 5))
        net = random_net(rng)
        out = NUMBA.mlp_forward(*net, X)
        np.testing.assert_allclose(out, NP.mlp_forward(*net, X), rtol=1e-13)
        assert np.all((out > 0) & (out < 1))


class TestBackendSwitch:
    def run_flag(self, value):
        env = dict(os.environ, INTENTMINER_NUMBA=value)
        code = "from intentminer import kernels; print(kernels.BACKEND)"
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                             check=True)
        return out.stdout.strip()

    @pytest.mark.parametrize("value", ["0", "false", "OFF"])
    def test_flag_forces_numpy(self, value):
        assert self.run_flag(value) == "numpy"

    @needs_numba
    def test_numba_by_default(self):
        assert self.run_flag("1") == "numba"


class TestThreads:
    def test_default_is_one(self, monkeypatch):
        monkeypatch.delenv("INTENTMINER_THREADS", raising=False)
        assert _accel.max_threads() == 1

    def test_invalid_value(self, monkeypatch):
        monkeypatch.setenv("INTENTMINER_THREADS", "many")
        with pytest.raises(ValueError):
            _accel.max_threads()

    @pytest.mark.parametrize("threads", ["1", "3"])
    def test_parallel_map_preserves_order(self, monkeypatch, threads):
        monkeypatch.setenv("INTENTMINER_THREADS", threads)
        assert _accel.parallel_map(lambda v: v * v, range(10)) == [v * v for v in range(10)]
