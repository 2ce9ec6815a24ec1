import numpy as np

from netinform._kernels import BACKEND, ss_sim
from netinform._kernels import pure


def test_backend_reported():
    assert BACKEND in ("compiled", "pure")


def test_compiled_matches_pure():
    rng = np.random.default_rng(0)
    for _ in range(5):
        n, m, p, T = 6, 3, 2, 400
        A = rng.uniform(-0.3, 0.3, (n, n))
        B = rng.standard_normal((n, m))
        C = rng.standard_normal((p, n))
        D = rng.standard_normal((p, m))
        u = rng.standard_normal((T, m))
        x0 = rng.standard_normal(n)
        got = ss_sim(A, B, C, D, u, x0)
        want = pure.ss_sim(A, B, C, D, u, x0)
        assert np.allclose(got, want, atol=1e-12)


def test_stateless_system():
    D = np.array([[2.0, 0.0]])
    u = np.arange(10.0).reshape(5, 2)
    y = ss_sim(np.zeros((0, 0)), np.zeros((0, 2)), np.zeros((1, 0)), D, u)
    assert np.allclose(y[:, 0], 2.0 * u[:, 0])


def test_geometric_decay():
    A = np.array([[0.5]])
    y = ss_sim(A, [[1.0]], [[1.0]], [[0.0]], np.ones((6, 1)))
    assert np.allclose(y.ravel(), [0.0, 1.0, 1.5, 1.75, 1.875, 1.9375])
