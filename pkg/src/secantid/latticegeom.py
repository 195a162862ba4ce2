"""Lattice combinatorics of toric embeddings: the sum set B, the rank behind
the quotient lattice M', and hyperplane point counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path

from .exactnum.lattice import IntMatrix, smith_rank
from .exactnum.matrix import bareiss_rank


@dataclass(frozen=True)
class LatticePolytope:
    """The lattice points P ∩ M of a lattice polytope, given explicitly."""

    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in p) for p in self.points)
        if not pts:
            raise ValueError("empty point set")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("points have different dimensions")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate lattice points")
        object.__setattr__(self, "points", pts)

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    @property
    def rank(self) -> int:
        """Rank of the affine span of the points."""
        p0 = self.points[0]
        diffs = [[a - b for a, b in zip(p, p0)] for p in self.points[1:]]
        if not diffs:
            return 0
        return smith_rank(IntMatrix.from_rows(diffs))[0]

    @property
    def n(self) -> int:
        return self.rank

    def __len__(self) -> int:
        return len(self.points)


def simplex_points(n: int, d: int) -> list[tuple[int, ...]]:
    """Lattice points of d times the standard n-simplex."""
    return [e for e in product(range(d + 1), repeat=n) if sum(e) <= d]


def product_points(factors: list[list[tuple[int, ...]]]) -> list[tuple[int, ...]]:
    return [sum(parts, ()) for parts in product(*factors)]


def parse_polytope_text(text: str) -> LatticePolytope:
    """One lattice point per line, whitespace-separated integers, ``#`` comments."""
    points = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            points.append(tuple(int(tok) for tok in line.split()))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: not a list of integers") from exc
    return LatticePolytope(tuple(points))


def read_polytope(path) -> LatticePolytope:
    return parse_polytope_text(Path(path).read_text())


def _affinely_independent_subsets(points, size):
    """DFS over subsets of ``size`` affinely independent points, pruning dependent prefixes."""
    pts = list(points)

    def extend(start, chosen, diffs):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        for i in range(start, len(pts)):
            if chosen:
                d = [a - b for a, b in zip(pts[i], chosen[0])]
                if bareiss_rank(diffs + [d]) < len(diffs) + 1:
                    continue
                yield from extend(i + 1, chosen + [pts[i]], diffs + [d])
            else:
                yield from extend(i + 1, [pts[i]], [])

    yield from extend(0, [], [])


def bset(P: LatticePolytope) -> list[tuple[int, ...]]:
    """Sums of (n+1)-subsets of P ∩ M whose affine span is the whole space."""
    n = P.rank
    if n != P.ambient_dim:
        raise ValueError("polytope is not full-dimensional in its lattice")
    sums = {
        tuple(sum(c) for c in zip(*subset))
        for subset in _affinely_independent_subsets(P.points, n + 1)
    }
    return sorted(sums)


def mprime_rank(P: LatticePolytope) -> dict:
    """Rank rho of <B - B> and the complementary rank n - rho.

    Both orientations are returned; which one the nondegeneracy criterion
    consumes is decided by callers (the jet Gauss test is ground truth).
    """
    B = bset(P)
    if not B:
        raise ValueError("no affinely spanning subset")
    b0 = B[0]
    diffs = [[a - b for a, b in zip(b, b0)] for b in B[1:]]
    rho, divisors = smith_rank(IntMatrix.from_rows(diffs)) if diffs else (0, [])
    n = P.rank
    return {"B": B, "rho": rho, "quotient_rank": n - rho, "elementary_divisors": divisors, "n": n}


def _hyperplane_normal(base, others):
    """Integer normal to the affine hull of ``base`` and ``others`` (n points in Z^n)."""
    diffs = [[a - b for a, b in zip(p, base)] for p in others]
    n = len(base)
    normal = []
    for i in range(n):
        minor = [row[:i] + row[i + 1:] for row in diffs]
        normal.append((-1) ** i * _det(minor))
    return normal


def _det(M) -> int:
    k = len(M)
    if k == 0:
        return 1
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(k):
        piv = next((i for i in range(c, k) if A[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, k):
            f = A[i][c] / A[c][c]
            A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return int(det)


def max_hyperplane_points(P: LatticePolytope) -> int:
    """Largest number of points of P ∩ M on a hyperplane spanned by points of P ∩ M."""
    n = P.rank
    if len(P) < n:
        raise ValueError("fewer points than the dimension")
    if n == 0:
        return len(P)
    best = 0
    seen = set()
    for subset in _affinely_independent_subsets(P.points, n):
        normal = _hyperplane_normal(subset[0], subset[1:])
        offset = sum(a * b for a, b in zip(normal, subset[0]))
        key = (tuple(normal), offset)
        if key in seen:
            continue
        seen.add(key)
        count = sum(1 for p in P.points if sum(a * b for a, b in zip(normal, p)) == offset)
        best = max(best, count)
    return best


def toric_bound(P: LatticePolytope) -> dict:
    """Strict bound floor((|P ∩ M| - m) / (n + 1)) with its ingredients."""
    n = P.rank
    m = max_hyperplane_points(P)
    value = (len(P) - m) // (n + 1)
    return {"h_bound": value, "num_points": len(P), "m": m, "n": n,
            "empty": value <= 1}
