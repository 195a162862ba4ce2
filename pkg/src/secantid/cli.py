"""Command-line entry point. Every subcommand prints one JSON report on stdout."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import is_dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import EMBEDDINGS, FAMILIES
from .certify import certify
from .exactnum.field import P61, P62
from .latticegeom import bset, max_hyperplane_points, mprime_rank, read_polytope, toric_bound
from .tangency import contact_locus_dim, gauss_rank
from .terracini import DEFAULT_SEED, DEFAULT_TRIALS, RefusedError, secant_dim
from .varieties import resolve_variety
from .witness import WitnessError, partition_witnesses, rnc_tangential_projection, verify_rnc_counterexample

SCHEMA_VERSION = "1.0"
SEED_ENV = "TERRACINI_SEED"


class UsageError(ValueError):
    pass


def jsonable(x):
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if is_dataclass(x):
        return jsonable(x.__dict__)
    return x


def _ints(s: str) -> list[int]:
    try:
        return [int(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def _primes(prime: int) -> tuple[int, int]:
    return (prime, P62) if prime == P61 else (prime, P61)


# ------------------------------------------------------------------ commands

def cmd_certify(a) -> dict:
    return certify(resolve_variety(a.variety), a.h, seed=a.seed, primes=_primes(a.prime)).to_dict()


def cmd_defect(a) -> dict:
    rep = secant_dim(resolve_variety(a.variety), a.h, trials=a.trials, seed=a.seed, primes=_primes(a.prime))
    d = rep.to_dict()
    if rep.defective:
        d["disclaimer"] = ("defectiveness is probabilistic: a random point of a non-defective variety "
                           "yields a rank drop with small probability; see per-prime ranks")
    return d


def cmd_gauss(a) -> dict:
    X = resolve_variety(a.variety)
    g = gauss_rank(X, seed=a.seed, trials=a.trials, primes=_primes(a.prime))
    return {"variety": X.name, "n": X.n, "gauss_rank": g, "degenerate": g < X.n}


def cmd_contact(a) -> dict:
    return contact_locus_dim(resolve_variety(a.variety), a.h, seed=a.seed, prime=a.prime).to_dict()


def _one(xs, name):
    if xs is None or len(xs) != 1:
        raise UsageError(f"--{name} needs a single integer")
    return xs[0]


def cmd_bound(a) -> dict:
    fam = a.family
    need = lambda v, name: v if v is not None else (_ for _ in ()).throw(UsageError(f"--{name} is required"))
    if fam == "sv":
        res = FAMILIES[fam](need(a.n, "n"), need(a.d, "d"))
    elif fam == "binary-sv":
        res = FAMILIES[fam](need(a.d, "d"))
    elif fam == "flag":
        res = FAMILIES[fam](need(a.k, "k"), _one(a.n, "n"))
    elif fam == "grassmannian":
        res = FAMILIES[fam](need(a.r, "r"), _one(a.n, "n"))
    elif fam == "g2n":
        res = FAMILIES[fam](_one(a.n, "n"))
    elif fam == "lagrangian-spinor":
        res = FAMILIES[fam](_one(a.n, "n"), a.embedding)
    elif fam == "moments":
        res = FAMILIES[fam](_one(a.d, "d"))
    else:
        res = FAMILIES[fam](need(a.a, "a"), _one(a.d, "d"), _one(a.n, "n"))
    return res.to_dict()


def cmd_witness(a) -> dict:
    if a.rnc_counterexample:
        if a.N is None or a.r is None:
            raise UsageError("--rnc-counterexample needs --N and --r")
        return verify_rnc_counterexample(a.N, a.r, seed=a.seed).to_dict()
    if a.project is not None:
        if a.N is None:
            raise UsageError("--project needs --N")
        return rnc_tangential_projection(a.N, a.project, seed=a.seed).to_dict()
    if a.variety is None or a.r is None or a.h is None:
        raise UsageError("witness needs --rnc-counterexample, --project, or --variety with --r and --h")
    wits = partition_witnesses(resolve_variety(a.variety), a.r, a.h, seed=a.seed)
    return {"variety": a.variety, "r": a.r, "h": a.h, "count": len(wits),
            "count_is_lower_bound": True, "witnesses": [w.to_dict() for w in wits]}


def cmd_polytope(a) -> dict:
    P = read_polytope(a.file)
    info = mprime_rank(P)
    return {"points": len(P), "n": P.n, "bset_size": len(bset(P)),
            "mprime": {k: v for k, v in info.items() if k != "B"},
            "max_hyperplane_points": max_hyperplane_points(P), "toric_bound": toric_bound(P)}


COMMANDS = {"certify": cmd_certify, "defect": cmd_defect, "gauss": cmd_gauss, "contact": cmd_contact,
            "bound": cmd_bound, "witness": cmd_witness, "polytope": cmd_polytope}


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    common.add_argument("--prime", type=int, choices=[P61, P62], default=P61, help="primary prime")
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    common.add_argument("--cache", type=Path, default=None, help="JSON-lines result cache")

    p = argparse.ArgumentParser(prog="secantid", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("certify", "defect", "contact"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--variety", required=True)
        s.add_argument("--h", type=int, required=True)
    s = sub.add_parser("gauss", parents=[common])
    s.add_argument("--variety", required=True)

    s = sub.add_parser("bound", parents=[common])
    s.add_argument("--family", required=True, choices=sorted(FAMILIES))
    s.add_argument("--n", type=_ints)
    s.add_argument("--d", type=_ints)
    s.add_argument("--k", type=_ints)
    s.add_argument("--r", type=int)
    s.add_argument("--a", type=int)
    s.add_argument("--embedding", choices=EMBEDDINGS, default="LG-pluecker")

    s = sub.add_parser("witness", parents=[common])
    s.add_argument("--rnc-counterexample", "--mainA", dest="rnc_counterexample", action="store_true",
                   help="verify that sec_r of the degree-N rational normal curve is not identifiable")
    s.add_argument("--project", type=int, metavar="T", help="tangential projection of the moment curve")
    s.add_argument("--N", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--h", type=int)
    s.add_argument("--variety")

    s = sub.add_parser("polytope", parents=[common])
    s.add_argument("--file", required=True)
    return p


def _canonical_args(a) -> dict:
    skip = {"seed", "cache", "prime", "command", "trials"} if a.command != "defect" else \
        {"seed", "cache", "prime", "command"}
    return {k: jsonable(v) for k, v in sorted(vars(a).items()) if k not in skip}


def _cache_key(a, args: dict) -> str:
    return json.dumps([a.command, args, a.seed, a.prime], sort_keys=True)


def _load_cache(path: Path) -> dict | None:
    """Cached reports by key; None when the file is corrupt."""
    if not path.exists():
        return {}
    out = {}
    try:
        for line in path.read_text().splitlines():
            if line.strip():
                rec = json.loads(line)
                out[rec["key"]] = rec["report"]
    except (ValueError, KeyError, TypeError):
        print(f"warning: cache {path} is corrupt; ignoring it", file=sys.stderr)
        return None
    return out


def run(argv=None) -> dict:
    a = build_parser().parse_args(argv)
    if a.seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            a.seed = int(env) if env else DEFAULT_SEED
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer")
    args = _canonical_args(a)
    cache = _load_cache(a.cache) if a.cache else None
    key = _cache_key(a, args)
    if cache and key in cache:
        return cache[key]
    result = jsonable(COMMANDS[a.command](a))
    report = {"schema_version": SCHEMA_VERSION, "command": a.command, "args": args, "seed": a.seed,
              "prime": a.prime, "version": __version__, "result": result}
    if a.cache and cache is not None:
        with a.cache.open("a") as fh:
            fh.write(json.dumps({"key": key, "report": report}, sort_keys=True) + "\n")
    return report


def main(argv=None) -> int:
    try:
        report = run(argv)
    except (ValueError, OSError, WitnessError, RefusedError) as exc:
        print(f"secantid: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
