"""Secant dimensions by Terracini rank computations at random points.

Every rank is computed modulo each prime on the same integer sample, so a
reported rank is a lower bound for the generic rank over Q. Full expected
rank is therefore a certificate; anything less is only probable.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .exactnum.field import DEFAULT_PRIMES, PrimeField
from .exactnum.matrix import ExactMatrix, intersect_dim, rank, span_intersection
from .varieties import ParamVariety, SecantPower

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240601
DEFAULT_TRIALS = 3

NONDEFECTIVE = "nondefective-certified"
DEFECTIVE = "defective-probable"
FILLS = "fills-ambient"


class RefusedError(RuntimeError):
    """A check whose hypotheses are known to fail."""


def expected_dim(n: int, h: int, N: int) -> int:
    return min(n * h + h - 1, N)


@dataclass
class RankReport:
    variety: str
    h: int
    n: int
    N: int
    seed: int
    trials: int
    primes: list[int]
    points: list[list[list[int]]]
    ranks: dict[str, list[int]]
    cone_rank: int
    dim: int
    expected_dim: int
    verdict: str
    primes_agree: bool
    notes: list[str] = field(default_factory=list)

    @property
    def defective(self) -> bool:
        return self.verdict == DEFECTIVE

    def to_dict(self) -> dict:
        return asdict(self)


def cone_span_rank(X: ParamVariety, points, p: int) -> int:
    """Rank of the stacked affine cone tangent spaces at ``points`` modulo p."""
    F = PrimeField(p)
    rows = np.vstack([X.cone_tangent_rows(u, F) for u in points])
    return rank(ExactMatrix(rows, F))


def _verdict(dim: int, exp: int, N: int) -> str:
    if dim < exp:
        return DEFECTIVE
    return FILLS if dim == N else NONDEFECTIVE


def secant_dim(X: ParamVariety, h: int, trials: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED,
               primes=DEFAULT_PRIMES) -> RankReport:
    """dim sec_h(X) as (max cone rank of h stacked tangent spaces) - 1."""
    if h < 1 or trials < 1:
        raise ValueError("need h >= 1 and trials >= 1")
    rng = np.random.default_rng(seed)
    points, ranks = [], {str(p): [] for p in primes}
    for _ in range(trials):
        pts = [X.sample_point(rng, primes) for _ in range(h)]
        points.append(pts)
        for p in primes:
            ranks[str(p)].append(cone_span_rank(X, pts, p))
    per_trial = list(zip(*ranks.values()))
    agree = all(len(set(t)) == 1 for t in per_trial)
    cone_rank = max(max(v) for v in ranks.values())
    dim = cone_rank - 1
    exp = expected_dim(X.n, h, X.N)
    if dim > exp:
        raise ArithmeticError(f"rank {cone_rank} exceeds the expected bound; variety data is wrong")
    report = RankReport(X.name, h, X.n, X.N, seed, trials, list(primes), points, ranks,
                        cone_rank, dim, exp, _verdict(dim, exp, X.N), agree)
    if not agree:
        report.notes.append("ranks disagree across primes; a sample hit a bad reduction")
        log.warning("prime disagreement for %s at h=%d: %s", X.name, h, ranks)
    if report.verdict == DEFECTIVE:
        report.notes.append("defectiveness is probabilistic: every sampled rank stayed below the expected one")
    return report


def is_defective(X: ParamVariety, h: int, **kw) -> tuple[str, RankReport]:
    """(verdict, report); verdict is nondefective-certified or defective-probable."""
    rep = secant_dim(X, h, **kw)
    return (DEFECTIVE if rep.defective else NONDEFECTIVE), rep


@dataclass
class FiberReport:
    variety: str
    h: int
    delta: int
    fiber_dim: int
    image_dim: int
    count_fiber_dim: int
    consistent: bool
    applicable: bool
    secant_report: RankReport

    def to_dict(self) -> dict:
        d = asdict(self)
        return d


def tangential_fiber_dim(X: ParamVariety, h: int, trials: int = DEFAULT_TRIALS,
                         seed: int = DEFAULT_SEED, primes=DEFAULT_PRIMES) -> FiberReport:
    """Fiber dimension of a general h-tangential projection, two ways.

    delta = dim(<T_x1..T_xh> ∩ T_x(h+1)) gives fiber_dim = delta + 1; the
    dimension count (h+1)n + h - dim sec_{h+1} must agree.
    """
    if h < 1:
        raise ValueError("need h >= 1")
    rng = np.random.default_rng(seed)
    delta, span = None, 0
    for _ in range(trials):
        pts = [X.sample_point(rng, primes) for _ in range(h + 1)]
        for p in primes:
            F = PrimeField(p)
            A = ExactMatrix(np.vstack([X.cone_tangent_rows(u, F) for u in pts[:h]]).T.copy(), F)
            B = ExactMatrix(X.cone_tangent_rows(pts[h], F).T.copy(), F)
            d = intersect_dim(A, B)
            delta = d if delta is None else min(delta, d)
            span = max(span, rank(A))
    rep = secant_dim(X, h + 1, trials=trials, seed=seed + 1, primes=primes)
    count = (h + 1) * X.n + h - rep.dim
    fiber = delta + 1
    # projecting from a span that fills the ambient space is meaningless
    applicable = span < X.N + 1
    return FiberReport(X.name, h, delta, fiber, X.n - delta - 1, count,
                       count == fiber if applicable else False, applicable, rep)


def _chart(X: ParamVariety, u, F):
    """Values and first derivatives in the affine chart where the last coordinate is 1."""
    val, grad, _ = X.taylor(u, F, order=1)
    last = val[-1]
    if F.is_zero(last):
        return None
    inv = F.inv(last)
    v = F.reduce_array(val[:-1] * inv)
    # d(φ_i/φ_N) = (dφ_i - (φ_i/φ_N) dφ_N) / φ_N
    g = F.reduce_array((grad[:-1, :] - np.outer(v, grad[-1, :])) * inv)
    return v, g.T.copy()


def _is_curve_secant(X: ParamVariety) -> bool:
    return isinstance(X, SecantPower) and X.r >= 2 and X.base is not None and "rnc_degree" in X.base.meta


@dataclass
class KernelReport:
    variety: str
    h: int
    n: int
    rows: int
    rank: int
    kernel_dim: int
    lambda1_zero: bool
    expected_kernel: int
    assumptions: list[str]
    defect_report: RankReport

    def to_dict(self) -> dict:
        return asdict(self)


def secant_map_jacobian(X: ParamVariety, xs, lambdas, F) -> np.ndarray:
    """Jacobian of the secant map in the chart (last coordinate 1, λ_{h+1} = 1),
    scaled by λ_1 + ... + λ_h + 1.

    ``xs`` holds h+1 parameter points, ``lambdas`` the h free weights.
    """
    h = len(lambdas)
    charts = [_chart(X, u, F) for u in xs]
    if any(c is None for c in charts):
        raise ZeroDivisionError("a sampled point lies off the chart")
    vals = [c[0] for c in charts]
    grads = [c[1] for c in charts]
    lam = [F(x) for x in lambdas]
    total = F(sum(lam) + 1)
    if F.is_zero(total):
        raise ZeroDivisionError("weights sum to -1")
    pi = F.reduce_array((sum(l * v for l, v in zip(lam, vals[:h])) + vals[h]) * F.inv(total))
    blocks = [F.reduce_array(lam[i] * grads[i]) for i in range(h)]
    blocks.append(grads[h])
    blocks.extend(F.reduce_array(vals[i] - pi).reshape(1, -1) for i in range(h))
    return np.vstack(blocks)


def secant_map_kernel_check(X: ParamVariety, h: int, seed: int = DEFAULT_SEED, prime: int = DEFAULT_PRIMES[0],
                       lambda1_zero: bool = True, trials: int = DEFAULT_TRIALS) -> KernelReport:
    """Kernel dimension of the secant-map differential at a point with λ_1 = 0.

    Expected to equal n when X is not (h+1)-defective and the residual fiber
    part is empty; the latter is assumed, not verified. With ``lambda1_zero``
    False the point is general and the expected kernel is 0.
    """
    verdict, rep = is_defective(X, h + 1, seed=seed)
    if verdict == DEFECTIVE:
        raise RefusedError(f"{X.name} is (h+1)-defective for h={h}: dim sec_{h + 1} = {rep.dim} "
                           f"< {rep.expected_dim}; the kernel statement does not apply")
    if _is_curve_secant(X) and (h + 1) * X.n + h <= X.N:
        raise RefusedError(
            f"{X.name} is a secant variety of a rational normal curve: it is not "
            f"{h + 1}-Bronowski, so the residual part of the (h+1)-secant fiber is nonempty "
            "and the kernel statement does not apply")
    if (h + 1) * X.n + h > X.N:
        raise RefusedError("(h+1)n + h > N: the secant map cannot be generically finite")
    F = PrimeField(prime)
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(trials):
        xs = [X.sample_point(rng) for _ in range(h + 1)]
        lams = [int(x) for x in rng.integers(1, 1 << 40, size=h)]
        if lambda1_zero:
            lams[0] = 0
        M = secant_map_jacobian(X, xs, lams, F)
        r = rank(ExactMatrix(M, F))
        best = r if best is None else max(best, r)
    kernel = (h + 1) * X.n + h - best
    # logged so the rank itself can be audited; kernel n means rank hn + h
    log.info("secant-map jacobian %s h=%d: rank %d of %d columns (hn+h = %d, n(h+1) = %d)",
             X.name, h, best, (h + 1) * X.n + h, h * X.n + h, X.n * (h + 1))
    return KernelReport(X.name, h, X.n, (h + 1) * X.m + h, best, kernel, lambda1_zero,
                        X.n if lambda1_zero else 0,
                        ["residual part of the (h+1)-secant fiber assumed empty (not verified)"], rep)


def cone_vertex_dim(X: ParamVariety, seed: int = DEFAULT_SEED, prime: int = DEFAULT_PRIMES[0],
                    min_points: int = 3) -> int:
    """Vector dimension of the common intersection of cone tangent spaces at random points.

    A cone's vertex lies on every tangent space, so a zero intersection
    certifies that X is not a cone.
    """
    F = PrimeField(prime)
    rng = np.random.default_rng(seed)
    W = ExactMatrix(X.cone_tangent_rows(X.sample_point(rng), F), F)
    stable, used = 0, 1
    prev = rank(W)
    while prev > 0 and (used < min_points or stable < 2) and used <= X.N + 2:
        T = ExactMatrix(X.cone_tangent_rows(X.sample_point(rng), F), F)
        W = span_intersection(W, T)
        used += 1
        cur = W.shape[0]
        stable = stable + 1 if cur == prev else 0
        prev = cur
    return prev


def cone_test(X: ParamVariety, **kw) -> bool:
    """True when X is (probably) a cone; False is certain."""
    return cone_vertex_dim(X, **kw) > 0


def point_in_partials_span(X: ParamVariety, u, prime: int = DEFAULT_PRIMES[0]) -> bool:
    """Whether φ(u) is a linear combination of the partials ∂φ/∂u_j(u)."""
    F = PrimeField(prime)
    val, grad, _ = X.taylor(u, F, order=1)
    G = ExactMatrix(grad.T.copy(), F)
    return rank(G) == rank(G.vstack(ExactMatrix(val.reshape(1, -1), F)))
