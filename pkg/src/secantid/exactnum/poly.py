"""Sparse polynomial maps and small univariate helpers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import _kernels
from .field import QQ, Field
from .jets import ForbiddenPointError, jet_eval

Poly = dict  # exponent tuple -> integer coefficient


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
        if out[e] == 0:
            del out[e]
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def poly_pow(a: Poly, d: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: 1}
    for _ in range(d):
        out = poly_mul(out, a)
    return out


def monomial(exp, coeff=1) -> Poly:
    return {tuple(exp): coeff}


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def poly_det(M: list[list[Poly]], nvars: int) -> Poly:
    """Leibniz expansion; entries are polynomials. Fine for the small minors used here."""
    k = len(M)
    total: Poly = {}
    for perm in permutations(range(k)):
        term: Poly = {(0,) * nvars: _perm_sign(perm)}
        for i, j in enumerate(perm):
            if not M[i][j]:
                term = {}
                break
            term = poly_mul(term, M[i][j])
        if term:
            total = poly_add(total, term)
    return total


@dataclass(frozen=True, eq=False)
class PolyMap:
    """A map k^nvars -> k^ncoords with (Laurent) polynomial coordinates.

    Stored as a flat term list: term t contributes coeffs[t] * u^exps[t]
    to coordinate rows[t].
    """

    coeffs: tuple
    exps: np.ndarray
    rows: np.ndarray
    nvars: int
    ncoords: int

    @classmethod
    def from_polys(cls, polys: list[Poly], nvars: int) -> PolyMap:
        coeffs, exps, rows = [], [], []
        for k, p in enumerate(polys):
            for e, c in sorted(p.items()):
                if len(e) != nvars:
                    raise ValueError("exponent length does not match nvars")
                coeffs.append(c)
                exps.append(e)
                rows.append(k)
        E = np.array(exps, dtype=np.int64).reshape(len(exps), nvars)
        return cls(tuple(coeffs), E, np.array(rows, dtype=np.int64), nvars, len(polys))

    def polys(self) -> list[Poly]:
        out: list[Poly] = [{} for _ in range(self.ncoords)]
        for c, e, k in zip(self.coeffs, self.exps.tolist(), self.rows.tolist()):
            out[k][tuple(e)] = out[k].get(tuple(e), 0) + c
        return out

    @property
    def has_negative_exponents(self) -> bool:
        return bool((self.exps < 0).any())

    def evaluate(self, point, field: Field = QQ) -> np.ndarray:
        if len(point) != self.nvars:
            raise ValueError("wrong number of parameters")
        u = [field(x) for x in point]
        out = np.array([field(0)] * self.ncoords, dtype=object)
        for c, e, k in zip(self.coeffs, self.exps.tolist(), self.rows.tolist()):
            v = field(c)
            for j, ej in enumerate(e):
                if ej < 0:
                    if field.is_zero(u[j]):
                        raise ForbiddenPointError(f"coordinate {j} is zero with exponent {ej}")
                    v = field(v * field.inv(u[j]) ** (-ej))
                elif ej:
                    v = field(v * u[j] ** ej)
            out[k] = field(out[k] + v)
        return out

    def taylor(self, point, field: Field = QQ, order: int = 2):
        """(val (K,), grad (K, m), hess (K, m, m)) at ``point``."""
        u = [field(x) for x in point]
        if len(u) != self.nvars:
            raise ValueError("wrong number of parameters")
        if all(not field.is_zero(x) for x in u):
            return _kernels.monomial_taylor(u, self.coeffs, self.exps, self.rows,
                                            self.ncoords, order, field)
        jets = jet_eval(self, u, field=field)
        val = np.array([j.val for j in jets], dtype=object)
        grad = np.array([list(j.grad) for j in jets], dtype=object).reshape(self.ncoords, self.nvars)
        hess = np.array([[list(r) for r in j.hess] for j in jets], dtype=object)
        hess = hess.reshape(self.ncoords, self.nvars, self.nvars) if order >= 2 else hess[:0]
        return val, grad, hess


# univariate polynomials over Q: coefficient lists, constant term first

def upoly_trim(a: list) -> list:
    a = [Fraction(x) for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_deg(a: list) -> int:
    return len(upoly_trim(a)) - 1


def upoly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return upoly_trim(out)


def upoly_divmod(a: list, b: list) -> tuple[list, list]:
    a, b = upoly_trim(a), upoly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        c = r[-1] / b[-1]
        s = len(r) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            r[s + i] -= c * y
        r = upoly_trim(r)
    return upoly_trim(q), r


def upoly_gcd(a: list, b: list) -> list:
    a, b = upoly_trim(a), upoly_trim(b)
    while b:
        a, b = b, upoly_divmod(a, b)[1]
    if not a:
        return []
    return [x / a[-1] for x in a]
