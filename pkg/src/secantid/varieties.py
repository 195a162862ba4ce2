"""Parametrized projective varieties: a catalog plus secant-power maps."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

import numpy as np

from .exactnum.field import DEFAULT_PRIMES, P61, QQ, Field, PrimeField
from .exactnum.matrix import ExactMatrix, rank
from .exactnum.poly import Poly, PolyMap, monomial, poly_add, poly_det, poly_mul, poly_pow
from .latticegeom import LatticePolytope, product_points, read_polytope, simplex_points

SAMPLE_BITS = 62


class DegenerateVarietyError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ParamVariety:
    """X ⊂ P^N of dimension n, given by a polynomial map from m parameters."""

    name: str
    kind: str
    n: int
    N: int
    polymap: PolyMap
    meta: dict = dc_field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.polymap.nvars

    @property
    def nvars(self) -> int:
        return self.polymap.nvars

    def evaluate(self, u, field: Field = QQ) -> np.ndarray:
        return self.polymap.evaluate(u, field)

    def taylor(self, u, field: Field, order: int = 2):
        return self.polymap.taylor(u, field, order)

    def cone_tangent_rows(self, u, field: Field) -> np.ndarray:
        """Rows φ(u), ∂_1φ(u), ..., ∂_mφ(u): a spanning set of the affine cone tangent space."""
        val, grad, _ = self.taylor(u, field, order=1)
        return np.vstack([val.reshape(1, -1), grad.T])

    def sample_point(self, rng: np.random.Generator, primes=DEFAULT_PRIMES) -> list[int]:
        """Random positive integers, nonzero modulo every prime in use."""
        while True:
            u = [int(x) for x in rng.integers(1, 1 << SAMPLE_BITS, size=self.m, dtype=np.int64)]
            if all(x % p for x in u for p in primes):
                return u

    def __repr__(self):
        return f"ParamVariety({self.name!r}, n={self.n}, N={self.N})"


@dataclass(frozen=True, eq=False)
class SecantPower(ParamVariety):
    """sec_r(Y) through (u^1..u^r, λ_1..λ_{r-1}) ↦ Σ λ_i φ_Y(u^i), λ_r = 1."""

    base: ParamVariety | None = None
    r: int = 1
    fills: bool = False


def _cone_rank_check(polymap: PolyMap, seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    F = PrimeField(P61)
    u = [int(x) for x in rng.integers(1, 1 << 61, size=polymap.nvars, dtype=np.int64)]
    val, grad, _ = polymap.taylor(u, F, order=1)
    return rank(ExactMatrix(np.vstack([val.reshape(1, -1), grad.T]), F))


def _finish(name, kind, n, polymap, meta=None) -> ParamVariety:
    got = _cone_rank_check(polymap)
    if got != n + 1:
        raise DegenerateVarietyError(f"{name}: cone tangent rank {got}, expected {n + 1}")
    return ParamVariety(name, kind, n, polymap.ncoords - 1, polymap, meta or {})


def prune_dependent(polys: list[Poly]) -> list[Poly]:
    """Drop coordinates that are linear combinations of earlier ones, so the image spans P^N."""
    monos = sorted({e for p in polys for e in p})
    index = {e: i for i, e in enumerate(monos)}
    kept, kept_rows = [], []
    current = 0
    for p in polys:
        row = [0] * len(monos)
        for e, c in p.items():
            row[index[e]] = c
        trial = kept_rows + [row]
        r = rank(ExactMatrix.from_rows(trial, QQ))
        if r > current:
            kept.append(p)
            kept_rows.append(row)
            current = r
    return kept


# ------------------------------------------------------------------ toric

def make_toric(P: LatticePolytope, name: str | None = None) -> ParamVariety:
    n = P.rank
    if n != P.ambient_dim:
        raise DegenerateVarietyError("lattice points do not affinely span their lattice")
    polys = [monomial(m) for m in P.points]
    pm = PolyMap.from_polys(polys, n)
    return _finish(name or f"toric:{len(P)}pts", "toric", n, pm, {"points": P.points})


def make_segre_veronese(ns, ds) -> ParamVariety:
    ns, ds = list(ns), list(ds)
    if len(ns) != len(ds) or not ns or min(ns) < 1 or min(ds) < 1:
        raise ValueError("need matching positive n and d vectors")
    pts = product_points([simplex_points(a, b) for a, b in zip(ns, ds)])
    name = "sv:" + ",".join(map(str, ns)) + ":" + ",".join(map(str, ds))
    X = make_toric(LatticePolytope(tuple(pts)), name)
    return ParamVariety(X.name, "toric", X.n, X.N, X.polymap, {**X.meta, "ns": ns, "ds": ds})


def make_veronese(n: int, d: int) -> ParamVariety:
    X = make_segre_veronese([n], [d])
    return ParamVariety(f"veronese:{n}:{d}", X.kind, X.n, X.N, X.polymap, X.meta)


def make_rnc(N: int) -> ParamVariety:
    if N < 1:
        raise ValueError("degree must be positive")
    X = make_toric(LatticePolytope(tuple((i,) for i in range(N + 1))), f"rnc:{N}")
    return ParamVariety(X.name, "toric", X.n, X.N, X.polymap, {**X.meta, "rnc_degree": N})


# ------------------------------------------------------------------ minor-based

def _const(c, nvars) -> Poly:
    return {(0,) * nvars: c} if c else {}


def _var(j, nvars) -> Poly:
    e = [0] * nvars
    e[j] = 1
    return {tuple(e): 1}


def _maximal_minors(M: list[list[Poly]], nvars: int) -> list[Poly]:
    k = len(M)
    cols = len(M[0])
    return [poly_det([[M[i][c] for c in S] for i in range(k)], nvars)
            for S in combinations(range(cols), k)]


def make_grassmannian(r: int, n: int) -> ParamVariety:
    """G(r, n): r-planes in P^n via maximal minors of [I | A], A free (r+1) x (n-r)."""
    if not 0 < r < n:
        raise ValueError("need 0 < r < n")
    k, free = r + 1, n - r
    nvars = k * free
    M = [[_const(1 if i == j else 0, nvars) for j in range(k)]
         + [_var(i * free + j, nvars) for j in range(free)] for i in range(k)]
    polys = _maximal_minors(M, nvars)
    return _finish(f"grass:{r}:{n}", "minor", nvars, PolyMap.from_polys(polys, nvars),
                   {"r": r, "ambient": n})


def flag_chart(ks, n):
    """Chart matrix for flags V_{k_1} ⊂ ... ⊂ V_{k_s} in P^n and its variable count.

    Row i (in block b) has a 1 in column i, zeros in the other columns up to
    k_b, and free entries beyond k_b; the first k_b+1 rows span V_{k_b}.
    """
    ks = list(ks)
    top = ks[-1]
    blocks = []
    prev = -1
    for k in ks:
        blocks.extend([k] * (k - prev))
        prev = k
    nvars = sum(n - blocks[i] for i in range(top + 1))
    M, v = [], 0
    for i in range(top + 1):
        row = []
        for j in range(n + 1):
            if j <= blocks[i]:
                row.append(_const(1 if i == j else 0, nvars))
            else:
                row.append(_var(v, nvars))
                v += 1
        M.append(row)
    return M, nvars


def flag_dimension(ks, n) -> int:
    ks = list(ks)
    d = (ks[0] + 1) * (n - ks[0])
    for a, b in zip(ks, ks[1:]):
        d += (n - b) * (b - a)
    return d


def make_flag(ks, n: int) -> ParamVariety:
    ks = list(ks)
    if not ks or any(a > b for a, b in zip(ks, ks[1:])) or ks[0] < 0 or ks[-1] >= n:
        raise ValueError("need 0 <= k_1 <= ... <= k_s < n")
    M, nvars = flag_chart(ks, n)
    coords: list[Poly] = [_const(1, nvars)]
    for k in ks:
        pl = _maximal_minors(M[: k + 1], nvars)
        coords = [poly_mul(a, b) for a in coords for b in pl]
    coords = prune_dependent([c for c in coords if c])
    dim = flag_dimension(ks, n)
    name = "flag:" + ",".join(map(str, ks)) + f":{n}"
    return _finish(name, "minor", dim, PolyMap.from_polys(coords, nvars), {"ks": ks, "ambient": n})


def make_lagrangian(n: int) -> ParamVariety:
    """LG(n, 2n) via n x n minors of [I | S], S symmetric."""
    if n < 1:
        raise ValueError("need n >= 1")
    nvars = n * (n + 1) // 2
    idx = {}
    for i in range(n):
        for j in range(i, n):
            idx[(i, j)] = idx[(j, i)] = len({v for v in idx.values()})
    M = [[_const(1 if i == j else 0, nvars) for j in range(n)]
         + [_var(idx[(i, j)], nvars) for j in range(n)] for i in range(n)]
    polys = prune_dependent([p for p in _maximal_minors(M, nvars) if p])
    return _finish(f"lg:{n}", "minor", nvars, PolyMap.from_polys(polys, nvars), {"n_lg": n})


# ------------------------------------------------------------------ moments, powers

def moment_polys(d: int) -> list[Poly]:
    """m_0 = 1, m_1 = μ, m_k = μ m_{k-1} + (k-1) σ² m_{k-2}; variables (μ, σ²)."""
    mu, s2 = {(1, 0): 1}, {(0, 1): 1}
    ms = [{(0, 0): 1}, mu]
    for k in range(2, d + 1):
        nxt = poly_add(poly_mul(mu, ms[k - 1]), {e: (k - 1) * c for e, c in poly_mul(s2, ms[k - 2]).items()})
        ms.append(nxt)
    return ms[: d + 1]


def make_moment_surface(d: int) -> ParamVariety:
    if d < 3:
        raise ValueError("moment surface needs d >= 3")
    return _finish(f"moments:{d}", "moment", 2, PolyMap.from_polys(moment_polys(d), 2), {"d": d})


def homogeneous_exponents(deg: int, nv: int) -> list[tuple[int, ...]]:
    """Exponents of degree-``deg`` monomials in ``nv`` variables, lexicographically decreasing."""
    if nv == 1:
        return [(deg,)]
    out = []
    for a in range(deg, -1, -1):
        out.extend((a,) + rest for rest in homogeneous_exponents(deg - a, nv - 1))
    return out


def power_polys(a: int, d: int, n: int) -> list[Poly]:
    """Coefficients of g^d as polynomials in the coefficients of g (degree a in n+1 variables)."""
    basis = homogeneous_exponents(a, n + 1)
    M = len(basis)
    nv = (n + 1) + M
    g: Poly = {}
    for i, alpha in enumerate(basis):
        e = list(alpha) + [0] * M
        e[n + 1 + i] = 1
        g[tuple(e)] = 1
    gd = poly_pow(g, d, nv)
    out_basis = homogeneous_exponents(a * d, n + 1)
    coords: dict = {b: {} for b in out_basis}
    for e, c in gd.items():
        coords[e[: n + 1]][e[n + 1:]] = c
    return [coords[b] for b in out_basis]


def make_powers(a: int, d: int, n: int) -> ParamVariety:
    if min(a, d, n) < 1:
        raise ValueError("need a, d, n >= 1")
    M = comb(a + n, n)
    polys = power_polys(a, d, n)
    return _finish(f"powers:{a}:{d}:{n}", "power", M - 1, PolyMap.from_polys(polys, M),
                   {"a": a, "d": d, "n_vars": n})


# ------------------------------------------------------------------ secant powers

def secant_polys(Y: ParamVariety, r: int) -> tuple[list[Poly], int]:
    my = Y.m
    nvars = r * my + (r - 1)
    polys: list[Poly] = [{} for _ in range(Y.polymap.ncoords)]
    for i in range(r):
        for c, e, k in zip(Y.polymap.coeffs, Y.polymap.exps.tolist(), Y.polymap.rows.tolist()):
            full = [0] * nvars
            full[i * my:(i + 1) * my] = e
            if i < r - 1:
                full[r * my + i] = 1
            key = tuple(full)
            polys[k][key] = polys[k].get(key, 0) + c
    return polys, nvars


def make_secant_power(Y: ParamVariety, r: int) -> SecantPower:
    if r < 1:
        raise ValueError("secant order must be positive")
    name = f"secant:{Y.name}:{r}"
    if r == 1:
        return SecantPower(name, "secant", Y.n, Y.N, Y.polymap, dict(Y.meta), base=Y, r=1)
    polys, nvars = secant_polys(Y, r)
    pm = PolyMap.from_polys(polys, nvars)
    expected = r * Y.n + r - 1
    probed = _cone_rank_check(pm) - 1
    return SecantPower(name, "secant", probed, Y.N, pm,
                       {"expected_dim": min(expected, Y.N)}, base=Y, r=r, fills=expected > Y.N)


# ------------------------------------------------------------------ spec strings

def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def resolve_variety(spec: str) -> ParamVariety:
    """Build a variety from its spec string (``veronese:2:3``, ``secant:rnc:11:2``, ...)."""
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    try:
        if head == "secant":
            inner, _, r = rest.rpartition(":")
            return make_secant_power(resolve_variety(inner), int(r))
        if head == "polytope":
            X = make_toric(read_polytope(rest), spec)
            return X
        args = rest.split(":") if rest else []
        if head == "veronese":
            return make_veronese(int(args[0]), int(args[1]))
        if head == "sv":
            return make_segre_veronese(_ints(args[0]), _ints(args[1]))
        if head == "rnc":
            return make_rnc(int(args[0]))
        if head == "grass":
            return make_grassmannian(int(args[0]), int(args[1]))
        if head == "flag":
            return make_flag(_ints(args[0]), int(args[1]))
        if head == "lg":
            return make_lagrangian(int(args[0]))
        if head == "moments":
            return make_moment_surface(int(args[0]))
        if head == "powers":
            return make_powers(int(args[0]), int(args[1]), int(args[2]))
    except (IndexError, ValueError) as exc:
        raise ValueError(f"cannot parse variety spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown variety family {head!r} in {spec!r}")
