"""Second-order truncated multivariate jets over an exact field."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import QQ, Field, FieldMismatchError


class ForbiddenPointError(ValueError):
    """A Laurent monomial was evaluated at a zero coordinate."""


@dataclass(frozen=True)
class Jet2:
    """f(x0 + t) truncated after the quadratic terms in t (t has m entries)."""

    val: object
    grad: tuple
    hess: tuple
    field: Field

    @classmethod
    def constant(cls, c, m: int, field: Field) -> Jet2:
        z = field(0)
        return cls(field(c), (z,) * m, ((z,) * m,) * m, field)

    @classmethod
    def variable(cls, value, direction, field: Field) -> Jet2:
        m = len(direction)
        z = field(0)
        return cls(field(value), tuple(field(d) for d in direction), ((z,) * m,) * m, field)

    @property
    def m(self) -> int:
        return len(self.grad)

    def _lift(self, other) -> Jet2:
        if isinstance(other, Jet2):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field.tag} vs {other.field.tag}")
            return other
        return Jet2.constant(other, self.m, self.field)

    def __add__(self, other) -> Jet2:
        o = self._lift(other)
        F = self.field
        return Jet2(
            F(self.val + o.val),
            tuple(F(a + b) for a, b in zip(self.grad, o.grad)),
            tuple(tuple(F(a + b) for a, b in zip(r, s)) for r, s in zip(self.hess, o.hess)),
            F,
        )

    __radd__ = __add__

    def __neg__(self) -> Jet2:
        F = self.field
        return Jet2(F(-self.val), tuple(F(-a) for a in self.grad),
                    tuple(tuple(F(-a) for a in r) for r in self.hess), F)

    def __sub__(self, other) -> Jet2:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Jet2:
        return self._lift(other) - self

    def __mul__(self, other) -> Jet2:
        o = self._lift(other)
        F, m = self.field, self.m
        f, g = self.val, o.val
        df, dg = self.grad, o.grad
        grad = tuple(F(f * dg[i] + g * df[i]) for i in range(m))
        hess = tuple(
            tuple(
                F(f * o.hess[i][j] + g * self.hess[i][j] + df[i] * dg[j] + dg[i] * df[j])
                for j in range(m)
            )
            for i in range(m)
        )
        return Jet2(F(f * g), grad, hess, F)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet2:
        F, m = self.field, self.m
        inv = F.inv(self.val)
        inv2 = F(inv * inv)
        inv3 = F(inv2 * inv)
        grad = tuple(F(-a * inv2) for a in self.grad)
        hess = tuple(
            tuple(F(2 * self.grad[i] * self.grad[j] * inv3 - self.hess[i][j] * inv2) for j in range(m))
            for i in range(m)
        )
        return Jet2(inv, grad, hess, F)

    def __truediv__(self, other) -> Jet2:
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other) -> Jet2:
        return self._lift(other) * self.reciprocal()

    def __pow__(self, e: int) -> Jet2:
        if e < 0:
            return self.reciprocal() ** (-e)
        result = Jet2.constant(1, self.m, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def jet_eval(poly_map, point, directions=None, field: Field = QQ) -> list[Jet2]:
    """Jets of every coordinate of ``poly_map`` at ``point``.

    ``directions`` is an (m_active x nvars) array; row k is the parameter
    direction of the k-th jet variable. Defaults to the identity.
    """
    nvars = poly_map.nvars
    if len(point) != nvars:
        raise ValueError(f"point has {len(point)} coordinates, map expects {nvars}")
    D = np.eye(nvars, dtype=int).astype(object) if directions is None else np.asarray(directions, dtype=object)
    xs = [Jet2.variable(point[j], list(D[:, j]), field) for j in range(nvars)]
    m = D.shape[0]
    out = [Jet2.constant(0, m, field) for _ in range(poly_map.ncoords)]
    for c, e, k in zip(poly_map.coeffs, poly_map.exps.tolist(), poly_map.rows.tolist()):
        term = Jet2.constant(c, m, field)
        for j, ej in enumerate(e):
            if ej == 0:
                continue
            if ej < 0 and field.is_zero(field(point[j])):
                raise ForbiddenPointError(f"coordinate {j} is zero with exponent {ej}")
            term = term * xs[j] ** ej
        out[k] = out[k] + term
    return out
