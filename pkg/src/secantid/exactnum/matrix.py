"""Dense exact matrices over a prime field or Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import _kernels
from .field import QQ, Field, FieldMismatchError, FieldScalar, PrimeField, common_field


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    entries: np.ndarray
    field: Field

    @classmethod
    def from_rows(cls, rows, field: Field) -> ExactMatrix:
        a = np.array(rows, dtype=object)
        if a.ndim == 1:
            a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
        if a.ndim != 2:
            raise ValueError("matrix rows must be 1-d sequences of equal length")
        out = np.empty(a.shape, dtype=object)
        for idx, x in np.ndenumerate(a):
            out[idx] = field(x)
        return cls(out, field)

    @classmethod
    def from_scalars(cls, rows) -> ExactMatrix:
        flat = [s for row in rows for s in row]
        field = common_field(flat)
        return cls.from_rows([[s.value for s in row] for row in rows], field)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def T(self) -> ExactMatrix:
        return ExactMatrix(self.entries.T.copy(), self.field)

    def __getitem__(self, idx) -> FieldScalar:
        return FieldScalar(self.entries[idx], self.field)

    def _check(self, other: ExactMatrix) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field.tag} vs {other.field.tag}")

    def vstack(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix(np.vstack([self.entries, other.entries]), self.field)

    def hstack(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix(np.hstack([self.entries, other.entries]), self.field)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check(other)
        return ExactMatrix(self.field.reduce_array(self.entries.dot(other.entries)), self.field)

    def rank(self) -> int:
        return rank(self)

    def __repr__(self):
        return f"ExactMatrix({self.shape[0]}x{self.shape[1]} over {self.field.tag})"


def as_matrix(m, field: Field | None = None) -> ExactMatrix:
    if isinstance(m, ExactMatrix):
        if field is not None and m.field != field:
            raise FieldMismatchError(f"{m.field.tag} vs {field.tag}")
        return m
    return ExactMatrix.from_rows(m, field or QQ)


def bareiss_rank(a: np.ndarray) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    A = [list(map(int, row)) for row in a]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r, prev = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                A[i][j] = (A[r][c] * A[i][j] - A[i][c] * A[r][j]) // prev
            A[i][c] = 0
        prev = A[r][c]
        r += 1
        if r == rows:
            break
    return r


def _integerize(entries: np.ndarray) -> list[list[int]]:
    out = []
    for row in entries:
        den = lcm(*(Fraction(x).denominator for x in row)) if len(row) else 1
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rank(m: ExactMatrix) -> int:
    """Exact rank over the matrix's field."""
    if not isinstance(m, ExactMatrix):
        raise TypeError("rank expects an ExactMatrix")
    if m.entries.size == 0:
        return 0
    if isinstance(m.field, PrimeField):
        return _kernels.rank_mod_p(m.entries, m.field.p)
    return bareiss_rank(_integerize(m.entries))


def rref(m: ExactMatrix, col_order=None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    ``col_order`` changes the order in which columns are tried as pivots;
    the returned pivots are original column indices.
    """
    F = m.field
    A = m.entries.copy()
    rows, cols = A.shape
    order = list(range(cols)) if col_order is None else list(col_order)
    pivots: list[int] = []
    r = 0
    for c in order:
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if not F.is_zero(A[i, c])), None)
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = F.reduce_array(A[r] * F.inv(A[r, c]))
        others = [i for i in range(rows) if i != r and not F.is_zero(A[i, c])]
        if others:
            A[others] = F.reduce_array(A[others] - np.outer(A[others, c], A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace(m: ExactMatrix) -> ExactMatrix:
    """Basis of {x : m x = 0}, one vector per row."""
    F = m.field
    rows, cols = m.shape
    R, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [F(0)] * cols
        v[f] = F(1)
        for i, pc in enumerate(pivots):
            v[pc] = F(-R[i, f])
        basis.append(v)
    if not basis:
        return ExactMatrix(np.empty((0, cols), dtype=object), F)
    return ExactMatrix.from_rows(basis, F)


def row_basis(m: ExactMatrix) -> ExactMatrix:
    R, _ = rref(m)
    return ExactMatrix(R, m.field)


def annihilator(rows_basis: ExactMatrix, col_order=None) -> ExactMatrix:
    """Rows q spanning {q : q . v = 0 for every row v}.

    The result is the complement projector used to reduce vectors modulo a
    span: ``Q w = 0`` iff ``w`` lies in the span. ``col_order`` picks which
    coordinates complete the basis, giving a different but equivalent Q.
    """
    F = rows_basis.field
    cols = rows_basis.shape[1]
    if rows_basis.shape[0] == 0:
        return ExactMatrix.from_rows(np.eye(cols, dtype=int).tolist(), F)
    R, pivots = rref(rows_basis, col_order)
    free = [c for c in (col_order or range(cols)) if c not in pivots]
    # w - sum_i w[p_i] R_i vanishes on pivot coordinates; its free coordinates
    # are zero exactly when w is in the span
    out = []
    for f in free:
        q = [F(0)] * cols
        q[f] = F(1)
        for i, pc in enumerate(pivots):
            q[pc] = F(-R[i, f])
        out.append(q)
    if not out:
        return ExactMatrix(np.empty((0, cols), dtype=object), F)
    return ExactMatrix.from_rows(out, F)


def intersect_dim(A: ExactMatrix, B: ExactMatrix) -> int:
    """Projective dimension of the intersection of two column spans (-1 = empty)."""
    if A.shape[1] == 0 or B.shape[1] == 0:
        raise ValueError("subspace basis has no columns")
    if A.shape[0] != B.shape[0]:
        raise ValueError("bases live in different ambient spaces")
    ra, rb = rank(A), rank(B)
    return ra + rb - rank(A.hstack(B)) - 1


def row_spaces_equal(A: ExactMatrix, B: ExactMatrix) -> bool:
    ra, rb = rank(A), rank(B)
    return ra == rb == rank(A.vstack(B))


def span_intersection(A: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Row basis of rowspace(A) ∩ rowspace(B)."""
    if A.field != B.field:
        raise FieldMismatchError("mixed fields")
    # x A = y B  <=>  [x, -y] [A; B] = 0
    stacked = A.vstack(B)
    K = nullspace(stacked.T)
    if K.shape[0] == 0:
        return ExactMatrix(np.empty((0, A.shape[1]), dtype=object), A.field)
    coeffs = ExactMatrix(K.entries[:, : A.shape[0]], A.field)
    return row_basis(coeffs @ A)
