"""Integer matrices and Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class IntMatrix:
    entries: np.ndarray

    @classmethod
    def from_rows(cls, rows) -> IntMatrix:
        a = np.array(rows, dtype=object)
        if a.size == 0:
            a = a.reshape(len(rows), 0) if a.ndim == 1 else a
        if a.ndim == 1:
            a = a.reshape(1, -1)
        return cls(np.vectorize(int, otypes=[object])(a) if a.size else a.astype(object))

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def smith_normal_form(A) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    if isinstance(A, IntMatrix):
        A = A.entries
    M = [list(map(int, row)) for row in np.asarray(A, dtype=object)]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(M[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if M[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        M[t], M[i0] = M[i0], M[t]
        for row in M:
            row[t], row[j0] = row[j0], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if M[i][t]:
                        done = False
                        if abs(M[i][t]) < abs(M[t][t]):
                            M[t], M[i] = M[i], M[t]
            for j in range(t + 1, cols):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    for row in M:
                        row[j] -= q * row[t]
                    if M[t][j]:
                        done = False
                        if abs(M[t][j]) < abs(M[t][t]):
                            for row in M:
                                row[t], row[j] = row[j], row[t]
            if not done:
                continue
            # divisibility: fold in any entry of the trailing block not divisible by the pivot
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if M[i][j] % M[t][t]),
                None,
            )
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        diag.append(abs(M[t][t]))
        t += 1
    return diag


def smith_rank(m: IntMatrix) -> tuple[int, list[int]]:
    """Rank over Q and the nonzero elementary divisors."""
    entries = m.entries if isinstance(m, IntMatrix) else np.asarray(m, dtype=object)
    if entries.size == 0:
        return 0, []
    divisors = smith_normal_form(entries)
    return len(divisors), divisors
