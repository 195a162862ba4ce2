import numpy as np
import pytest

from secantid.exactnum import P61, P62, PrimeField
from secantid.exactnum import _kernels as K


def _random_lowrank(rng, rows, cols, k, p):
    A = rng.integers(0, 1 << 30, (rows, k)).astype(object) @ rng.integers(0, 1 << 30, (k, cols)).astype(object)
    return A % p


@pytest.mark.parametrize("p", [P61, P62])
def test_rank_backends_agree(p):
    rng = np.random.default_rng(11)
    for _ in range(25):
        rows, cols = rng.integers(1, 14, size=2)
        k = int(rng.integers(0, min(rows, cols) + 1))
        A = _random_lowrank(rng, int(rows), int(cols), k, p)
        r_numba = K.rank_mod_p(A, p, use_numba=True)
        r_numpy = K.rank_mod_p(A, p, use_numba=False)
        assert r_numba == r_numpy == k


@pytest.mark.parametrize("p", [P61, P62])
def test_taylor_backends_agree(p):
    rng = np.random.default_rng(5)
    F = PrimeField(p)
    T, m, Kc = 12, 3, 4
    coeffs = tuple(int(c) for c in rng.integers(-5, 6, T))
    exps = rng.integers(-2, 4, (T, m)).astype(np.int64)
    rows = rng.integers(0, Kc, T).astype(np.int64)
    u = [int(x) for x in rng.integers(1, 1 << 40, m)]
    a = K.monomial_taylor([F(x) for x in u], coeffs, exps, rows, Kc, 2, F, use_numba=True)
    b = K.monomial_taylor([F(x) for x in u], coeffs, exps, rows, Kc, 2, F, use_numba=False)
    for x, y in zip(a, b):
        assert x.shape == y.shape
        assert all(int(s) == int(t) for s, t in zip(x.ravel(), y.ravel()))


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("SECANTID_DISABLE_NUMBA", "1")
    assert K.backend_name() == "numpy"
    monkeypatch.delenv("SECANTID_DISABLE_NUMBA")
    assert K.backend_name() in ("numba", "numpy")


def test_zero_coordinate_rejected():
    F = PrimeField(P61)
    with pytest.raises(ZeroDivisionError):
        K.monomial_taylor([F(0)], (1,), np.array([[-1]], dtype=np.int64), np.array([0], dtype=np.int64), 1, 1, F)


def test_secant_dim_same_on_both_backends(monkeypatch):
    from secantid.terracini import secant_dim
    from secantid.varieties import resolve_variety

    X = resolve_variety("sv:1,1:2,2")
    fast = secant_dim(X, 3)
    monkeypatch.setenv("SECANTID_DISABLE_NUMBA", "1")
    slow = secant_dim(X, 3)
    assert fast.ranks == slow.ranks and fast.dim == slow.dim == 7
