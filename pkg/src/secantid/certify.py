"""Identifiability certificates from three checks: dimension count, secant
nondefectiveness one step up, and a nondegenerate Gauss map."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import __version__
from .exactnum.field import DEFAULT_PRIMES
from .tangency import gauss_rank
from .terracini import DEFAULT_SEED, DEFECTIVE, is_defective
from .varieties import ParamVariety, SecantPower, resolve_variety
from .witness import partition_witnesses

IDENTIFIABLE = "identifiable"
WITNESSED = "not-identifiable-witnessed"
INCONCLUSIVE = "inconclusive"

# facts about specific inputs that the three checks cannot see
KNOWN_FACTS = {
    ("veronese:2:6", 9): "a general point of sec_9 lies on two distinct 8-planes spanned by 9 points "
                         "(two decompositions), so it is not 9-identifiable",
}

TWD_CAVEAT = ("the certificate criterion does not apply to varieties whose Gauss map is degenerate "
              "(1-tangentially weakly defective)")


@dataclass
class Certificate:
    variety: str
    h: int
    n: int
    N: int
    checks: dict
    conclusion: str
    reasons: list[str]
    confidence: dict
    evidence: dict
    seed: int
    primes: list[int]
    version: str = __version__
    caveats: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def certify(X: ParamVariety | str, h: int, seed: int = DEFAULT_SEED, primes=DEFAULT_PRIMES) -> Certificate:
    if isinstance(X, str):
        X = resolve_variety(X)
    if h < 1:
        raise ValueError("need h >= 1")
    n, N = X.n, X.N
    checks: dict = {}
    evidence: dict = {}
    reasons: list[str] = []
    confidence = {"inequality": "exact", "nondefective": "skipped", "gauss": "skipped"}
    cert = Certificate(X.name, h, n, N, checks, INCONCLUSIVE, reasons, confidence, evidence,
                       seed, list(primes))
    fact = KNOWN_FACTS.get((X.name, h))
    if fact:
        cert.caveats.append(fact)

    lhs = (h + 1) * n + h
    checks["inequality"] = {"lhs": lhs, "N": N, "passed": lhs <= N}
    if lhs > N:
        reasons.append(f"inequality fails: (h+1)n + h = {lhs} > N = {N}; the criterion needs it")
        return cert

    verdict, rep = is_defective(X, h + 1, seed=seed, primes=primes)
    evidence["secant_report"] = rep.to_dict()
    checks["nondefective"] = {"verdict": verdict, "h": h + 1, "dim": rep.dim,
                              "expected_dim": rep.expected_dim, "passed": verdict != DEFECTIVE}
    confidence["nondefective"] = "certified" if verdict != DEFECTIVE else "probable"
    if verdict == DEFECTIVE:
        reasons.append(f"X is probably {h + 1}-defective (dim {rep.dim} < {rep.expected_dim})")
        return cert

    g = gauss_rank(X, seed=seed, primes=primes)
    checks["gauss"] = {"rank": g, "n": n, "passed": g == n}
    confidence["gauss"] = "probabilistic"
    if g == n:
        cert.conclusion = IDENTIFIABLE
        reasons.append("all three hypotheses hold")
        return cert

    reasons.append(f"Gauss map is degenerate (rank {g} < {n})")
    cert.caveats.append(TWD_CAVEAT)
    if isinstance(X, SecantPower) and X.r >= 2 and X.base is not None:
        wits = partition_witnesses(X.base, X.r, h, seed=seed)
        evidence["witnesses"] = [w.to_dict() for w in wits]
        if len(wits) >= 2 and all(w.verified for w in wits):
            cert.conclusion = WITNESSED
            confidence["witnesses"] = "exact"
            reasons.append(f"{len(wits)} distinct exact decompositions of one general point")
    return cert
