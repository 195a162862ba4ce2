"""Compare the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from secantid.exactnum import P61, PrimeField
from secantid.exactnum import _kernels as K
from secantid.terracini import secant_dim
from secantid.varieties import resolve_variety


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_rank(size, repeat):
    rng = np.random.default_rng(0)
    A = (rng.integers(0, 1 << 40, (size, size)).astype(object) * rng.integers(1, 1 << 20)) % P61
    K.rank_mod_p(A, P61, use_numba=True)  # compile
    return (_best(lambda: K.rank_mod_p(A, P61, use_numba=True), repeat),
            _best(lambda: K.rank_mod_p(A, P61, use_numba=False), repeat))


def bench_taylor(spec, repeat):
    X = resolve_variety(spec)
    F = PrimeField(P61)
    pm = X.polymap
    u = [F(x) for x in X.sample_point(np.random.default_rng(1))]
    run = lambda flag: K.monomial_taylor(u, pm.coeffs, pm.exps, pm.rows, pm.ncoords, 2, F, use_numba=flag)
    run(True)
    return _best(lambda: run(True), repeat), _best(lambda: run(False), repeat)


def bench_secant(spec, h, repeat):
    X = resolve_variety(spec)
    secant_dim(X, h)
    fast = _best(lambda: secant_dim(X, h), repeat)
    os.environ["SECANTID_DISABLE_NUMBA"] = "1"
    try:
        slow = _best(lambda: secant_dim(X, h), repeat)
    finally:
        del os.environ["SECANTID_DISABLE_NUMBA"]
    return fast, slow


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rows = []
    for n in (30, 70, 120):
        rows.append((f"rank mod p {n}x{n}", *bench_rank(n, args.repeat)))
    for spec in ("veronese:2:6", "sv:1,1,1:2,2,2", "grass:3:7"):
        rows.append((f"2-jet {spec}", *bench_taylor(spec, args.repeat)))
    for spec, h in (("veronese:2:6", 10), ("grass:3:7", 4)):
        rows.append((f"secant_dim {spec} h={h}", *bench_secant(spec, h, args.repeat)))
    print(f"{'case':34s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, fast, slow in rows:
        print(f"{name:34s} {fast * 1e3:10.2f} {slow * 1e3:10.2f} {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
