"""Exact non-identifiability witnesses over Q.

Planes are handled as row bases of ExactMatrix over QQ. All incidence
checks here are unconditional; nothing is reduced modulo a prime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial

import numpy as np

from .exactnum.field import QQ
from .exactnum.matrix import (
    ExactMatrix, annihilator, rank, row_basis, row_spaces_equal, rref, span_intersection,
)
from .exactnum.poly import upoly_deg, upoly_divmod, upoly_gcd, upoly_trim
from .terracini import DEFAULT_SEED, secant_dim
from .varieties import ParamVariety, make_rnc

MAX_RETRIES = 20
SMALL = 60


class WitnessError(ArithmeticError):
    """A construction degenerated or a precondition failed."""


def _mat(rows) -> ExactMatrix:
    return ExactMatrix.from_rows(rows, QQ)


def canonical(M: ExactMatrix) -> list[list[str]]:
    """Reduced row echelon form as strings, for stable comparison and JSON."""
    R, _ = rref(M)
    return [[str(x) for x in row] for row in R]


def _normalize(v) -> list[Fraction]:
    lead = next(x for x in v if x != 0)
    return [Fraction(x) / lead for x in v]


def _contains(M: ExactMatrix, v) -> bool:
    return rank(M) == rank(M.vstack(_mat([list(v)])))


@dataclass
class PlaneWitness:
    ambient_dim: int
    point: list[Fraction]
    planes: list[ExactMatrix]
    plane: ExactMatrix
    meets: list[list[Fraction]]
    verified: bool

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "point": [str(x) for x in self.point],
            "plane": canonical(self.plane),
            "meets": [[str(x) for x in v] for v in self.meets],
            "verified": self.verified,
        }


def _span(*mats: ExactMatrix) -> ExactMatrix:
    M = mats[0]
    for other in mats[1:]:
        M = M.vstack(other)
    return M


def _one_point(M: ExactMatrix, what: str) -> ExactMatrix:
    if M.shape[0] != 1:
        raise WitnessError(f"{what}: expected a single point, got a space of vector dimension {M.shape[0]}")
    return M


def _transversal(planes: list[ExactMatrix], p: ExactMatrix) -> ExactMatrix:
    h = len(planes)
    if h == 1:
        return p
    rest = planes[:-1]
    W = _span(*rest)
    lam = _span(p, W)
    q = _one_point(span_intersection(lam, planes[-1]), f"step h={h}: span through p meeting the last plane")
    line = _span(p, q)
    if rank(line) != 2:
        raise WitnessError(f"step h={h}: p lies on the last plane")
    p2 = _one_point(span_intersection(line, W), f"step h={h}: line through p and q meeting the other planes")
    inner = _transversal(rest, p2)
    return row_basis(_span(q, inner))


def transversal_plane(planes, p) -> PlaneWitness:
    """The unique (h-1)-plane through p meeting each of h disjoint (r-1)-planes.

    ``planes`` are row bases (all of the same size r) whose union spans a
    space of vector dimension h*r containing p.
    """
    planes = [P if isinstance(P, ExactMatrix) else _mat(P) for P in planes]
    if not planes:
        raise WitnessError("no planes given")
    r = planes[0].shape[0]
    cols = planes[0].shape[1]
    if any(P.shape != (r, cols) or rank(P) != r for P in planes):
        raise WitnessError("every input plane needs r independent rows of equal length")
    h = len(planes)
    total = _span(*planes)
    if rank(total) != h * r:
        raise WitnessError("planes are not disjoint or do not jointly span")
    pv = [Fraction(x) for x in (p.entries[0] if isinstance(p, ExactMatrix) else p)]
    if not _contains(total, pv):
        raise WitnessError("p is outside the span of the planes")
    out = _transversal(planes, _mat([pv]))
    if out.shape[0] != h:
        raise WitnessError(f"output plane has vector dimension {out.shape[0]}, expected {h}")
    meets = []
    for P in planes:
        X = span_intersection(out, P)
        if X.shape[0] != 1:
            raise WitnessError("output plane does not meet an input plane in exactly one point")
        meets.append(_normalize(X.entries[0]))
    ok = _contains(out, pv)
    return PlaneWitness(cols - 1, pv, planes, out, meets, ok)


def set_partitions(n: int, r: int):
    """Partitions of range(n) into unordered blocks of size r."""
    if n == 0:
        yield []
        return
    first = 0
    others = list(range(1, n))
    for comb in combinations(others, r - 1):
        block = (first,) + comb
        remaining = [x for x in others if x not in comb]
        for tail in set_partitions(len(remaining), r):
            yield [block] + [tuple(remaining[i] for i in b) for b in tail]


def partition_count(h: int, r: int) -> int:
    return factorial(h * r) // (factorial(r) ** h * factorial(h))


def _small_point(rng, m) -> list[int]:
    return [int(x) for x in rng.integers(1, SMALL, size=m)]


def partition_witnesses(Y: ParamVariety, r: int, h: int, seed: int = DEFAULT_SEED) -> list[PlaneWitness]:
    """One transversal-plane witness through a general p of sec_h(sec_r Y) per partition of hr points of Y."""
    if r < 1 or h < 1:
        raise ValueError("need r, h >= 1")
    if h * r > Y.N + 1:
        raise ValueError(f"{h * r} points of {Y.name} cannot be independent in P^{Y.N}")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RETRIES):
        pts = [Y.evaluate(_small_point(rng, Y.m), QQ) for _ in range(h * r)]
        Ymat = _mat([list(v) for v in pts])
        if rank(Ymat) != h * r:
            continue
        coeffs = _small_point(rng, h * r)
        p = [sum(c * v[k] for c, v in zip(coeffs, pts)) for k in range(len(pts[0]))]
        try:
            out = []
            for part in set_partitions(h * r, r):
                planes = [_mat([list(pts[i]) for i in block]) for block in part]
                out.append(transversal_plane(planes, p))
        except WitnessError:
            continue
        for a, b in combinations(out, 2):
            if row_spaces_equal(a.plane, b.plane):
                raise WitnessError("two partitions produced the same plane")
        return out
    raise WitnessError(f"sampling kept degenerating after {MAX_RETRIES} attempts")


# ------------------------------------------------------------------ projections of the moment curve

def _moment_rows(s: int, N: int):
    val = [Fraction(s) ** j for j in range(N + 1)]
    der = [j * Fraction(s) ** (j - 1) if j else Fraction(0) for j in range(N + 1)]
    return val, der


def _pullback(A: ExactMatrix, c) -> list:
    """Coefficients (constant first) of Σ_k c_k ψ_k(s), ψ = A·(1, s, ..., s^N)."""
    return upoly_trim(list(np.dot(np.array(c, dtype=object), A.entries)))


@dataclass
class ProjectionReport:
    N: int
    t: int
    params: list[int]
    span_dim: int
    degree: int
    map_degree: int
    birational: bool
    base_degree: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def rnc_tangential_projection(N: int, t: int, seed: int = DEFAULT_SEED) -> ProjectionReport:
    """Project the degree-N moment curve from the span of t tangent lines."""
    if t < 0 or 2 * t > N - 1:
        raise ValueError("need 0 <= 2t <= N - 1")
    rng = np.random.default_rng(seed)
    params = sorted(int(x) for x in rng.choice(np.arange(1, 4 * N + 4 * t + 8), size=t, replace=False))
    rows = []
    for s in params:
        rows.extend(_moment_rows(s, N))
    if t:
        T = _mat(rows)
        if rank(T) != 2 * t:
            raise WitnessError("tangent lines failed to impose independent conditions")
        A = annihilator(row_basis(T))
    else:
        A = _mat(np.eye(N + 1, dtype=int).tolist())
    span_dim = rank(A) - 1
    polys = [upoly_trim(list(row)) for row in A.entries]
    g = polys[0]
    for f in polys[1:]:
        g = upoly_gcd(g, f)
    top = max(upoly_deg(f) for f in polys)
    moving = top - upoly_deg(g)
    best_fiber = None
    for _ in range(MAX_RETRIES if span_dim >= 2 else 0):
        s0 = int(rng.integers(-5 * N, 5 * N))
        if s0 in params:
            continue
        point = [sum(Fraction(a) * Fraction(s0) ** j for j, a in enumerate(f)) if f else Fraction(0) for f in polys]
        hs = []
        for _ in range(2):
            c = _small_point(rng, span_dim + 1)
            # move c onto the hyperplanes through ψ(s0) by fixing one coordinate
            k = next((i for i, x in enumerate(point) if x != 0), None)
            if k is None:
                break
            c[k] = 0
            c[k] = -sum(ci * x for ci, x in zip(c, point)) / point[k]
            hs.append(upoly_divmod(_pullback(A, c), g)[0])
        if len(hs) < 2:
            continue
        common = upoly_gcd(*hs)
        fiber = upoly_deg(common) + (1 if all(upoly_deg(f) < moving for f in hs) else 0)
        best_fiber = fiber if best_fiber is None else min(best_fiber, fiber)
        if best_fiber == 1:
            break
    if span_dim >= 2:
        map_degree = best_fiber if best_fiber else 0
    else:
        map_degree = moving  # image is a line; the map degree is the whole moving degree
    degree = moving // map_degree if map_degree else 0
    return ProjectionReport(N, t, params, span_dim, degree, map_degree, map_degree == 1, upoly_deg(g))


# ------------------------------------------------------------------ counterexample dossier

@dataclass
class CounterexampleDossier:
    N: int
    r: int
    h: int
    checks: dict
    decompositions: int
    witnesses: list[PlaneWitness]
    projection: ProjectionReport
    verdict: str
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "N": self.N, "r": self.r, "h": self.h, "checks": self.checks,
            "decompositions": self.decompositions,
            "decompositions_is_lower_bound": True,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "projection": self.projection.to_dict(),
            "verdict": self.verdict, "notes": self.notes,
        }


def verify_rnc_counterexample(N: int, r: int, seed: int = DEFAULT_SEED) -> CounterexampleDossier:
    """Verify that sec_r of the degree-N rational normal curve is not h-identifiable, h = (N+1)/2r."""
    if N < 7:
        raise ValueError("need N >= 7")
    if r < 1 or (N + 1) % (2 * r):
        raise ValueError("2r must divide N + 1")
    h = (N + 1) // (2 * r)
    if h < 2:
        raise ValueError("need h = (N+1)/2r >= 2")
    G = make_rnc(N)
    full = secant_dim(G, h * r, seed=seed)
    small = secant_dim(G, r, seed=seed)
    proj = rnc_tangential_projection(N, r * (h - 1), seed=seed)
    wits = partition_witnesses(G, r, h, seed=seed)
    checks = {
        "nondefective": full.dim == min(2 * h * r - 1, N) and not full.defective,
        "secant_dim": full.dim,
        "projection_birational": proj.birational,
        "projection_minimal_degree": proj.degree == proj.span_dim == 2 * r - 1,
        "witness_count": len(wits),
        "witness_count_expected": partition_count(h, r),
        "witnesses_verified": all(w.verified for w in wits),
        "perfect_case": h * small.dim + h - 1 == N,
    }
    ok = (checks["nondefective"] and checks["projection_birational"] and checks["projection_minimal_degree"]
          and len(wits) >= 2 and checks["witnesses_verified"] and checks["perfect_case"])
    return CounterexampleDossier(N, r, h, checks, len(wits), wits, proj,
                                 "counterexample-verified" if ok else "not-verified",
                                 ["decomposition count is a lower bound on the secant degree"])
