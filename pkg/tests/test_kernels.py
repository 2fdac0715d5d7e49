import numpy as np
import pytest

from gonlab import kernels


@pytest.fixture(params=["numpy"] + (["numba"] if kernels.NUMBA_AVAILABLE else []))
def backend(request):
    prev = "numba" if kernels.using_numba() else "numpy"
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(prev)


def test_cheb_min_matches_linprog(backend):
    from scipy.optimize import linprog

    rng = np.random.default_rng(3)
    for _ in range(10):
        c = rng.normal(size=5)
        G = rng.normal(size=(5, 2))
        val, x, ok = kernels.cheb_min(c, G)
        assert ok
        # reference LP: minimise t subject to -t <= c + Gx <= t
        A = np.block([[G, -np.ones((5, 1))], [-G, -np.ones((5, 1))]])
        b = np.concatenate([-c, c])
        ref = linprog([0, 0, 1], A_ub=A, b_ub=b, bounds=[(None, None)] * 3)
        assert val == pytest.approx(ref.fun, abs=1e-9)
        assert np.abs(c + G @ x).max() == pytest.approx(val, abs=1e-12)


def test_cheb_min_is_scale_invariant(backend):
    c = np.array([1e-9, -2e-9, 3e-9])
    G = np.array([[1e-9], [1e-9], [2e-9]])
    val, _, ok = kernels.cheb_min(c, G)
    assert ok and val > 0


def test_enumerate_short_finds_all_points(backend):
    R = np.array([[1.0, 0.3], [0.0, 0.8]])
    coeffs, norms = kernels.enumerate_short(R, 2.0, 1000)
    found = {tuple(int(x) for x in c) for c in coeffs}
    brute = set()
    for a in range(-5, 6):
        for b in range(-5, 6):
            if (a, b) > (0, 0) and np.sum((R @ np.array([a, b])) ** 2) <= 2.0:
                brute.add((a, b))
    canon = {c if c > (0, 0) else tuple(-x for x in c) for c in found}
    assert canon == brute
    assert np.all(norms <= 2.0 + 1e-12)


def test_enumerate_short_respects_cap(backend):
    R = np.eye(3)
    coeffs, _ = kernels.enumerate_short(R, 100.0, 5)
    assert coeffs is None


def test_backends_agree():
    if not kernels.NUMBA_AVAILABLE:
        pytest.skip("numba not installed")
    rng = np.random.default_rng(11)
    R = np.triu(rng.normal(size=(4, 4))) + 2 * np.eye(4)
    out = []
    for b in ("numpy", "numba"):
        kernels.set_backend(b)
        c, _ = kernels.enumerate_short(R, 9.0, 10_000)
        out.append(sorted(tuple(int(x) for x in row) for row in c))
    kernels.set_backend("numba")
    assert out[0] == out[1]
