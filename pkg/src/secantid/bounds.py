"""Closed-form identifiability ranges, evaluated with exact rationals.

Every evaluator returns a strict bound: h is covered when h < h_bound. A
bound <= 1 covers no positive h and is reported as empty, not clamped.
"""

from __future__ import annotations

import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from math import comb, floor, prod

# ------------------------------------------------------------------ results


@dataclass
class BoundResult:
    family: str
    params: dict
    h_bound: int | None
    applicable: bool = True
    strict: bool = True
    raw: dict = field(default_factory=dict)
    exceptions: list = field(default_factory=list)
    excluded_h: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    source: str = ""

    @property
    def empty(self) -> bool:
        return self.h_bound is None or self.h_bound <= 1

    def covers(self, h: int) -> bool:
        return self.applicable and self.h_bound is not None and 1 <= h < self.h_bound \
            and h not in self.excluded_h

    def to_dict(self) -> dict:
        d = asdict(self)
        d["empty"] = self.empty
        return d


def _floor(x: Fraction) -> int:
    return floor(x)


def floor_log2(x: int) -> int:
    if x < 1:
        raise ValueError("log2 of a non-positive integer")
    return x.bit_length() - 1


# ------------------------------------------------------------------ exception tables

_SYM = re.compile(r"^(\d*)a(?:\+(\d+))?$")


def _parse_entry(token: str):
    token = token.strip()
    if token.isdigit():
        return int(token)
    m = _SYM.match(token)
    if not m:
        raise ValueError(f"bad table entry {token!r}")
    return (int(m.group(1) or 1), int(m.group(2) or 0))


@lru_cache(maxsize=None)
def load_table(name: str) -> tuple:
    text = resources.files("secantid").joinpath("data", name).read_text()
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        left, right = line.split(";")
        rows.append((tuple(_parse_entry(t) for t in left.split(",")), _parse_entry(right)))
    return tuple(rows)


def _match(pattern, values) -> dict | None:
    """Match integers against a pattern of ints and (k, c) linear forms in a shared a >= 1."""
    if len(pattern) != len(values):
        return None
    a = None
    for p, v in zip(pattern, values):
        if isinstance(p, int):
            if p != v:
                return None
            continue
        k, c = p
        if (v - c) % k or (v - c) // k < 1:
            return None
        val = (v - c) // k
        if a is not None and a != val:
            return None
        a = val
    return {"a": a} if a is not None else {}


def _instantiate(p, env) -> int | None:
    if isinstance(p, int):
        return p
    if "a" not in env:
        return None
    k, c = p
    return k * env["a"] + c


def table_hits(name: str, key: tuple) -> list[tuple[tuple, int]]:
    """Entries of an exception table whose left side matches ``key``; returns (key, h)."""
    hits = []
    for left, right in load_table(name):
        env = _match(left, list(key))
        if env is None:
            continue
        h = _instantiate(right, env)
        if h is not None:
            hits.append((tuple(key), h))
    return hits


# ------------------------------------------------------------------ evaluators

def bound_segre_veronese(ns, ds) -> BoundResult:
    ns, ds = list(ns), list(ds)
    if len(ns) != len(ds) or not ns or min(ns + ds) < 1:
        raise ValueError("need matching positive n and d vectors")
    total = prod(comb(n + d, d) for n, d in zip(ns, ds))
    scale = Fraction(1, sum(ns) + 1) * total
    best = max(Fraction(n, d) for n, d in zip(ns, ds))
    js = [j for j, (n, d) in enumerate(zip(ns, ds)) if Fraction(n, d) == best]
    values = {j: _floor(Fraction(ds[j], ns[j] + ds[j]) * scale) for j in js}
    j = max(js, key=lambda i: (values[i], -i))
    res = BoundResult("segre-veronese", {"n": ns, "d": ds}, values[j], source="segre-veronese")
    res.raw = {"j": j, "candidates": {str(k): v for k, v in values.items()}}
    return res


def bound_binary_sv(ds) -> BoundResult:
    ds = list(ds)
    if not ds or min(ds) < 1:
        raise ValueError("need positive degrees")
    r = len(ds)
    total = prod(d + 1 for d in ds)
    b = _floor(Fraction(total, r + 1))
    res = BoundResult("binary-sv", {"d": ds}, b, source="binary-segre-veronese")
    res.flags["perfect"] = total % (r + 1) == 0
    res.flags["subgeneric_all"] = min(ds) >= 3
    if res.flags["subgeneric_all"]:
        res.notes.append("every degree is at least 3: identifiable for all subgeneric ranks")
    key = tuple(sorted(ds))
    for k, h in table_hits("binary_sv_defective.txt", key):
        res.exceptions.append({"d": list(k), "h": h})
        if h < b:
            res.excluded_h.append(h)
    if key == (2, 2, 2):
        res.notes.append("not 6-identifiable: the general point has two decompositions")
    return res


def bound_flag(ks, n: int) -> BoundResult:
    ks = sorted(ks)
    if not ks or ks[0] < 0 or ks[-1] >= n:
        raise ValueError("need 0 <= k_1 <= ... <= k_r < n")
    res = BoundResult("flag", {"k": ks, "n": n}, None, source="flag")
    ls = [j for j, k in enumerate(ks, start=1) if n >= 2 * k + 1]
    if not ls:
        res.applicable = False
        res.notes.append("no index j with n >= 2k_j + 1")
        return res
    l = max(ls)
    arg = sum(ks[:l]) + l - 1
    if arg < 1:
        res.applicable = False
        res.notes.append("logarithm argument is zero")
        return res
    e = floor_log2(arg)
    res.h_bound = _floor(Fraction(n + 1, ks[l - 1] + 1) ** e)
    res.raw = {"l": l, "exponent": e}
    return res


def bound_grassmannian(r: int, n: int) -> BoundResult:
    if r < 2:
        raise ValueError("Grassmannians of lines are excluded (r >= 2)")
    if n <= r:
        raise ValueError("need n > r")
    general = bound_flag([r], n)
    refined = _floor(Fraction(comb(n + 1, r + 1), (n - r) * (r + 1) + 1))
    small = min(refined, 13)
    cands = [small] + ([general.h_bound] if general.applicable else [])
    b = max(cands)
    res = BoundResult("grassmannian", {"r": r, "n": n}, b, source="grassmannian")
    res.raw = {"general": general.h_bound if general.applicable else None, "refined": refined,
               "refined_capped": small}
    if not general.applicable:
        res.notes.extend(general.notes)
    for (_, h) in table_hits("grassmannian_defective.txt", (r, n)):
        res.exceptions.append({"r": r, "n": n, "h": h})
        if h < b:
            res.excluded_h.append(h)
    if res.excluded_h:
        res.notes.append(f"defective at h in {sorted(res.excluded_h)}; bound holds for the other h")
    return res


def bound_g2n(n: int) -> BoundResult:
    res = BoundResult("g2n", {"n": n}, None, source="grassmannian-planes")
    if n < 9:
        res.applicable = False
        res.notes.append("requires n >= 9")
        return res
    a = _floor(Fraction(n * n, 18) - Fraction(20 * n, 27) + Fraction(287, 81))
    b = _floor(Fraction(6 * n - 13, 9))
    res.h_bound = a + b
    res.raw = {"first": a, "second": b}
    return res


EMBEDDINGS = ("LG-pluecker", "spinor-pluecker", "spinor-minimal")


def bound_lagrangian_spinor(n: int, embedding: str) -> BoundResult:
    if embedding not in EMBEDDINGS:
        raise ValueError(f"unknown embedding {embedding!r}; expected one of {EMBEDDINGS}")
    if n < 2:
        raise ValueError("need n >= 2")
    res = BoundResult("lagrangian-spinor", {"n": n, "embedding": embedding}, None, source=embedding)
    if embedding == "LG-pluecker":
        base = (n + 1) // 2
        res.raw = {"formula": base}
        small = 4 if n >= 5 else None
        if small is not None:
            res.raw["small_h"] = small
        res.h_bound = max(base, small or 0)
    elif embedding == "spinor-pluecker":
        res.h_bound = n // 2
        res.raw = {"formula": res.h_bound}
    else:
        base = (n + 2) // 4
        res.raw = {"formula": base}
        if n in (7, 8):
            res.h_bound = min(base, 2)
            res.notes.append("2-identifiability is not available for n in {7, 8}")
        else:
            res.raw["small_h"] = 3
            res.h_bound = max(base, 3)
    return res


def bound_moments(d: int) -> BoundResult:
    if d < 3:
        raise ValueError("need d >= 3")
    return BoundResult("moments", {"d": d}, (d + 1) // 3, source="gaussian-moments")


def bound_powers(a: int, d: int, n: int) -> BoundResult:
    if min(a, d, n) < 1:
        raise ValueError("need a, d, n >= 1")
    v = Fraction(comb(a * d + n, n), comb(a + n, n)) - comb(a + n, n) - 1
    res = BoundResult("powers", {"a": a, "d": d, "n": n}, _floor(v) + 1, source="powers")
    res.raw = {"value": str(v), "non_strict": _floor(v)}
    return res


FAMILIES = {
    "sv": bound_segre_veronese,
    "binary-sv": bound_binary_sv,
    "flag": bound_flag,
    "grassmannian": bound_grassmannian,
    "g2n": bound_g2n,
    "lagrangian-spinor": bound_lagrangian_spinor,
    "moments": bound_moments,
    "powers": bound_powers,
}
