"""Gauss-map rank and local dimension of tangential contact loci from second-order jets."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .exactnum.field import DEFAULT_PRIMES, PrimeField
from .exactnum.matrix import ExactMatrix, annihilator, rank, row_basis
from .terracini import DEFAULT_SEED, DEFAULT_TRIALS, secant_dim
from .varieties import ParamVariety

MAX_RESAMPLES = 8

NOT_TWD = "not-h-twd-probable"
TWD = "h-twd-probable"


def _second_order_rank(Q: ExactMatrix, hess: np.ndarray, F) -> int:
    """Rank of the matrix with rows (q, i) and columns j holding q · ∂_i∂_j φ."""
    m = hess.shape[1]
    if Q.shape[0] == 0 or m == 0:
        return 0
    # hess[k, i, j]; contract over k
    J = np.tensordot(Q.entries, hess, axes=([1], [0])).reshape(Q.shape[0] * m, m)
    return rank(ExactMatrix(F.reduce_array(J), F))


def _tangent_complement(X: ParamVariety, pts, F, reverse: bool = False) -> tuple[int, ExactMatrix]:
    rows = np.vstack([X.cone_tangent_rows(u, F) for u in pts])
    B = row_basis(ExactMatrix(rows, F))
    cols = list(range(X.N + 1))
    return B.shape[0], annihilator(B, cols[::-1] if reverse else None)


def gauss_rank_at(X: ParamVariety, u, prime: int = DEFAULT_PRIMES[0]) -> int:
    F = PrimeField(prime)
    span, Q = _tangent_complement(X, [u], F)
    if span != X.n + 1:
        return 0  # singular point or bad reduction; carries no information
    _, _, hess = X.taylor(u, F, order=2)
    return _second_order_rank(Q, hess, F)


def gauss_rank(X: ParamVariety, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
               primes=DEFAULT_PRIMES) -> int:
    """Generic rank of the Gauss-map differential; equals n iff the Gauss map is nondegenerate.

    Computed as m - dim{v : Σ_j v_j ∂_i∂_jφ ∈ T̂ for all i}, which also handles
    homogeneous parametrizations (the Euler direction is always in the kernel).
    """
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        u = X.sample_point(rng, primes)
        best = max(best, max(gauss_rank_at(X, u, p) for p in primes))
    if best > X.n:
        raise ArithmeticError("Gauss rank exceeds the dimension; variety data is wrong")
    return best


@dataclass
class ContactReport:
    variety: str
    h: int
    n: int
    points: list[list[int]]
    span_dim: int
    gamma: int
    jacobian_rank: int
    degenerate: bool
    projector_independent: bool
    verdict: str
    prime: int
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def contact_constraint(X: ParamVariety, Q: ExactMatrix, u, F) -> np.ndarray:
    """g(u) = Q · [φ(u) | ∂φ(u)]; vanishes where Λ is tangent to X."""
    rows = X.cone_tangent_rows(u, F)
    return F.reduce_array(Q.entries.dot(rows.T))


def contact_locus_dim(X: ParamVariety, h: int, seed: int = DEFAULT_SEED,
                      prime: int = DEFAULT_PRIMES[0]) -> ContactReport:
    """Local dimension at x_1 of the locus where ⟨T_x1..T_xh⟩ stays tangent to X.

    γ̂ = n - rank of the Jacobian of g at x_1. It bounds the true local
    dimension from above (Zariski tangent space, and mod-p ranks only drop).
    """
    if h < 1:
        raise ValueError("need h >= 1")
    F = PrimeField(prime)
    notes: list[str] = []
    generic = secant_dim(X, h, seed=seed, primes=DEFAULT_PRIMES).cone_rank
    if generic < min(h * (X.n + 1), X.N + 1):
        notes.append(f"X is {h}-defective; the span of tangent spaces has dimension {generic - 1}")
    rng = np.random.default_rng(seed + 7)
    for _ in range(MAX_RESAMPLES):
        pts = [X.sample_point(rng) for _ in range(h)]
        span, Q = _tangent_complement(X, pts, F)
        if span == generic:
            break
    else:
        raise ArithmeticError(f"span of {h} tangent spaces never reached its generic dimension")
    if Q.shape[0] == 0:
        notes.append("tangent spaces fill the ambient space; every point is a contact point")
        return ContactReport(X.name, h, X.n, pts, span - 1, X.n, 0, True, True, TWD, prime, notes)
    if any(not F.is_zero(x) for x in contact_constraint(X, Q, pts[0], F).ravel()):
        raise ArithmeticError("contact constraint does not vanish at its own base point")
    _, _, hess = X.taylor(pts[0], F, order=2)
    r1 = _second_order_rank(Q, hess, F)
    _, Q2 = _tangent_complement(X, pts, F, reverse=True)
    r2 = _second_order_rank(Q2, hess, F)
    gamma = X.n - r1
    return ContactReport(X.name, h, X.n, pts, span - 1, gamma, r1, False, r1 == r2,
                         TWD if gamma > 0 else NOT_TWD, prime, notes)


IDENTIFIABLE_PROBABLE = "identifiable-probable"
NO_CONCLUSION = "no-conclusion"


def twd_identifiability_hint(X: ParamVariety, h: int, **kw) -> tuple[str, ContactReport]:
    """Not h-tangentially weakly defective implies h-identifiable; the converse fails."""
    rep = contact_locus_dim(X, h, **kw)
    return (IDENTIFIABLE_PROBABLE if rep.gamma == 0 else NO_CONCLUSION), rep
