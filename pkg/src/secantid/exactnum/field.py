"""Exact ground fields: a large prime field and the rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# Two primes above 2**60; both below 2**63 so residues fit a machine word.
P61 = (1 << 61) - 1
P62 = (1 << 62) - 57
DEFAULT_PRIMES = (P61, P62)


class FieldMismatchError(ValueError):
    """Raised when scalars from different fields are combined."""


@dataclass(frozen=True)
class PrimeField:
    p: int

    @property
    def tag(self) -> str:
        return f"F_{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def reduce_array(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.p)

    def is_zero(self, x) -> bool:
        return x % self.p == 0


@dataclass(frozen=True)
class RationalField:
    @property
    def tag(self) -> str:
        return "Q"

    @property
    def characteristic(self) -> int:
        return 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, np.integer):
            return Fraction(int(x))
        if isinstance(x, Fraction) and type(x.numerator) is not int:
            return Fraction(int(x.numerator), int(x.denominator))
        return Fraction(x)

    def inv(self, x) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(x)

    def reduce_array(self, a: np.ndarray) -> np.ndarray:
        return a

    def is_zero(self, x) -> bool:
        return x == 0


QQ = RationalField()
Field = PrimeField | RationalField


@dataclass(frozen=True)
class FieldScalar:
    """An element of a prime field or of Q, tagged by its field."""

    value: int | Fraction
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _other(self, other) -> int | Fraction:
        if isinstance(other, FieldScalar):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field.tag} vs {other.field.tag}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def _wrap(self, v) -> FieldScalar:
        return FieldScalar(v, self.field)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value * self.field.inv(o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(o * self.field.inv(self.value))

    def __neg__(self):
        return self._wrap(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self._wrap(self.field.inv(self.value)) ** (-e)
        if isinstance(self.field, PrimeField):
            return self._wrap(pow(self.value, e, self.field.p))
        return self._wrap(self.value**e)

    def __eq__(self, other):
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __repr__(self):
        return f"{self.value} in {self.field.tag}"


def common_field(scalars) -> Field:
    """Field shared by all scalars; raises on mixture or empty input."""
    fields = {s.field for s in scalars}
    if not fields:
        raise ValueError("no scalars")
    if len(fields) > 1:
        raise FieldMismatchError("scalars from " + ", ".join(sorted(f.tag for f in fields)))
    return fields.pop()
