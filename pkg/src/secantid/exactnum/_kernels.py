"""Hot loops: modular rank and monomial Taylor data.

Each kernel has a numba implementation (Montgomery arithmetic on uint64,
valid for odd primes below 2**63) and a pure-numpy fallback on Python-int
object arrays. Set ``SECANTID_DISABLE_NUMBA=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_ENV_FLAG = "SECANTID_DISABLE_NUMBA"


def numba_enabled() -> bool:
    if numba is None:
        return False
    return os.environ.get(_ENV_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


def backend_name() -> str:
    return "numba" if numba_enabled() else "numpy"


def montgomery_constants(p: int) -> tuple[int, int]:
    """(-p^-1 mod 2^64, 2^128 mod p) for an odd prime p < 2^63."""
    if p % 2 == 0 or p >= 1 << 63:
        raise ValueError("Montgomery kernels need an odd modulus below 2**63")
    pinv = (-pow(p, -1, 1 << 64)) % (1 << 64)
    return pinv, pow(2, 128, p)


# ---------------------------------------------------------------- numba path

if numba is not None:
    _M32 = np.uint64(0xFFFFFFFF)
    _S32 = np.uint64(32)
    _ZERO = np.uint64(0)
    _ONE = np.uint64(1)

    @njit(inline="always")
    def _mulhilo(a, b):
        a_lo = a & _M32
        a_hi = a >> _S32
        b_lo = b & _M32
        b_hi = b >> _S32
        ll = a_lo * b_lo
        lh = a_lo * b_hi
        hl = a_hi * b_lo
        hh = a_hi * b_hi
        mid = (ll >> _S32) + (lh & _M32) + (hl & _M32)
        hi = hh + (lh >> _S32) + (hl >> _S32) + (mid >> _S32)
        return hi, a * b

    @njit(inline="always")
    def _mont(a, b, p, pinv):
        thi, tlo = _mulhilo(a, b)
        m = tlo * pinv
        mhi, _ = _mulhilo(m, p)
        carry = _ONE if tlo != _ZERO else _ZERO
        t = thi + mhi + carry
        if t >= p:
            t -= p
        return t

    @njit(inline="always")
    def _addm(a, b, p):
        s = a + b
        if s >= p:
            s -= p
        return s

    @njit(inline="always")
    def _powm(x, e, one, p, pinv):
        r = one
        while e > 0:
            if e & 1:
                r = _mont(r, x, p, pinv)
            x = _mont(x, x, p, pinv)
            e >>= 1
        return r

    @njit(inline="always")
    def _int_to_mont(x, p, pinv, r2):
        if x < 0:
            v = p - np.uint64(-x)
        else:
            v = np.uint64(x)
        if v >= p:
            v -= p
        return _mont(v, r2, p, pinv)

    @njit(cache=True)
    def _rank_numba(A, p, pinv):
        # fraction-free elimination in the Montgomery-twisted field; rank is
        # unaffected by the twist since it only rescales every entry
        rows, cols = A.shape
        r = 0
        for c in range(cols):
            piv = -1
            for i in range(r, rows):
                if A[i, c] != _ZERO:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = A[r, j]
                    A[r, j] = A[piv, j]
                    A[piv, j] = tmp
            a = A[r, c]
            for i in range(r + 1, rows):
                b = A[i, c]
                if b == _ZERO:
                    continue
                for j in range(c, cols):
                    x = _mont(a, A[i, j], p, pinv)
                    y = _mont(b, A[r, j], p, pinv)
                    A[i, j] = x - y if x >= y else x + (p - y)
            r += 1
            if r == rows:
                break
        return r

    @njit(cache=True)
    def _taylor_numba(u, uinv, coeffs, exps, rows, K, order, p, pinv, r2):
        T, m = exps.shape
        one = _mont(_ONE, r2, p, pinv)
        um = np.empty(m, dtype=np.uint64)
        uim = np.empty(m, dtype=np.uint64)
        for j in range(m):
            um[j] = _mont(u[j], r2, p, pinv)
            uim[j] = _mont(uinv[j], r2, p, pinv)
        val = np.zeros(K, dtype=np.uint64)
        grad = np.zeros((K, m), dtype=np.uint64)
        hess = np.zeros((K, m, m) if order >= 2 else (0, 0, 0), dtype=np.uint64)
        for t in range(T):
            mono = _mont(coeffs[t], r2, p, pinv)
            for j in range(m):
                e = exps[t, j]
                if e > 0:
                    mono = _mont(mono, _powm(um[j], e, one, p, pinv), p, pinv)
                elif e < 0:
                    mono = _mont(mono, _powm(uim[j], -e, one, p, pinv), p, pinv)
            k = rows[t]
            val[k] = _addm(val[k], mono, p)
            if order < 1:
                continue
            for j in range(m):
                e = exps[t, j]
                if e == 0:
                    continue
                g = _mont(mono, _int_to_mont(e, p, pinv, r2), p, pinv)
                g = _mont(g, uim[j], p, pinv)
                grad[k, j] = _addm(grad[k, j], g, p)
            if order < 2:
                continue
            for j in range(m):
                ej = exps[t, j]
                if ej == 0:
                    continue
                for l in range(m):
                    el = exps[t, l]
                    c = ej * el - (ej if j == l else 0)
                    if c == 0:
                        continue
                    g = _mont(mono, _int_to_mont(c, p, pinv, r2), p, pinv)
                    g = _mont(g, uim[j], p, pinv)
                    g = _mont(g, uim[l], p, pinv)
                    hess[k, j, l] = _addm(hess[k, j, l], g, p)
        for k in range(K):
            val[k] = _mont(val[k], _ONE, p, pinv)
            for j in range(m):
                grad[k, j] = _mont(grad[k, j], _ONE, p, pinv)
                if order >= 2:
                    for l in range(m):
                        hess[k, j, l] = _mont(hess[k, j, l], _ONE, p, pinv)
        return val, grad, hess


# ---------------------------------------------------------------- numpy path

def _rank_numpy(A: np.ndarray, p: int) -> int:
    A = np.array(A, dtype=object) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        below = A[r + 1:, c]
        mask = below != 0
        if mask.any():
            idx = r + 1 + np.nonzero(mask)[0]
            A[idx, c:] = (A[idx, c:] - np.outer(A[idx, c], A[r, c:])) % p
        r += 1
    return r


def _taylor_numpy(u, coeffs, exps, rows, K, order, field):
    """Closed-form monomial Taylor data on object arrays over ``field``."""
    T, m = exps.shape
    uinv = [field.inv(x) for x in u]
    mono = np.array([field(c) for c in coeffs], dtype=object)
    for j in range(m):
        cache: dict[int, object] = {}
        col = np.empty(T, dtype=object)
        for t, e in enumerate(exps[:, j].tolist()):
            if e not in cache:
                base = u[j] if e >= 0 else uinv[j]
                cache[e] = field(base**abs(e)) if field.characteristic == 0 else pow(base, abs(e), field.p)
            col[t] = cache[e]
        mono = field.reduce_array(mono * col)
    val = np.array([field(0)] * K, dtype=object)
    np.add.at(val, rows, mono)
    val = field.reduce_array(val)
    E = exps.astype(object)
    ui = np.array(uinv, dtype=object)
    grad = np.empty((K, m), dtype=object)
    grad.fill(field(0))
    hess = np.empty((K, m, m) if order >= 2 else (0, 0, 0), dtype=object)
    if order >= 1:
        g = field.reduce_array(mono[:, None] * E * ui[None, :])
        np.add.at(grad, rows, g)
        grad = field.reduce_array(grad)
    if order >= 2:
        hess.fill(field(0))
        coef = E[:, :, None] * E[:, None, :]
        idx = np.arange(m)
        coef[:, idx, idx] -= E
        hterm = field.reduce_array(mono[:, None, None] * coef * (ui[:, None] * ui[None, :])[None, :, :])
        np.add.at(hess, rows, hterm)
        hess = field.reduce_array(hess)
    return val, grad, hess


# ---------------------------------------------------------------- dispatch

def rank_mod_p(A, p: int, use_numba: bool | None = None) -> int:
    """Rank of an integer matrix reduced mod the odd prime ``p``."""
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise ValueError("rank needs a 2-d array")
    if A.size == 0:
        return 0
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba and p < 1 << 63 and p % 2 == 1:
        pinv, _ = montgomery_constants(p)
        W = np.array((A % p).tolist(), dtype=np.uint64).reshape(A.shape)
        return int(_rank_numba(W, np.uint64(p), np.uint64(pinv)))
    return _rank_numpy(A, p)


def monomial_taylor(u, coeffs, exps, rows, K, order, field, use_numba: bool | None = None):
    """Value, gradient (K, m) and Hessian (K, m, m) of a sparse Laurent map.

    ``u`` must have no zero coordinate; callers needing zeros go through the
    jet arithmetic instead.
    """
    if any(field.is_zero(x) for x in u):
        raise ZeroDivisionError("closed-form kernel needs a torus point")
    if use_numba is None:
        use_numba = numba_enabled()
    prime = field.characteristic
    if use_numba and prime and prime % 2 == 1 and prime < 1 << 63:
        pinv, r2 = montgomery_constants(prime)
        ua = np.array([field(x) for x in u], dtype=np.uint64)
        uia = np.array([field.inv(x) for x in u], dtype=np.uint64)
        ca = np.array([field(c) for c in coeffs], dtype=np.uint64)
        val, grad, hess = _taylor_numba(
            ua, uia, ca, np.ascontiguousarray(exps, dtype=np.int64),
            np.ascontiguousarray(rows, dtype=np.int64), K, order,
            np.uint64(prime), np.uint64(pinv), np.uint64(r2),
        )
        return val.astype(object), grad.astype(object), hess.astype(object)
    return _taylor_numpy([field(x) for x in u], coeffs, exps, rows, K, order, field)
