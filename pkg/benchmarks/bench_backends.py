"""Benchmark the numba kernels against the no-JIT fallback.

Runs the three hot paths under both backends and prints a table of
wall times and speedups. Results are also cross-checked for equality,
so a run doubles as a backend-parity audit.

Usage:
    python3 benchmarks/bench_backends.py [--lmax 36] [--oracle-ell 20] [--gp-n 23]
"""

from __future__ import annotations

import argparse
import time

from gpfree import (
    available_backends,
    g_bruteforce,
    rk_bruteforce_oracle,
    rk_table,
    use_backend,
)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmax", type=int, default=36,
                    help="table depth for the branch-and-bound case (default 36)")
    ap.add_argument("--oracle-ell", type=int, default=20, dest="oracle_ell",
                    help="ground-set size for the enumeration oracle (default 20)")
    ap.add_argument("--gp-n", type=int, default=23, dest="gp_n",
                    help="n for the progression-oracle DFS (default 23)")
    args = ap.parse_args()

    backends = available_backends()
    if "numba" in backends:
        # pay JIT compilation once, outside the timed region
        with use_backend("numba"):
            rk_table(3, 8)
            rk_bruteforce_oracle(3, 8)
            g_bruteforce(3, 2, 8)

    cases = [
        ("rk_table(3, %d)" % args.lmax, lambda: rk_table(3, args.lmax)),
        ("rk_bruteforce_oracle(3, %d)" % args.oracle_ell,
         lambda: rk_bruteforce_oracle(3, args.oracle_ell, cap=args.oracle_ell)),
        ("g_bruteforce(3, 2, %d)" % args.gp_n,
         lambda: g_bruteforce(3, 2, args.gp_n, cap=args.gp_n)),
    ]

    print("backends under test: %s" % ", ".join(backends))
    header = "%-32s %12s %12s %9s" % ("case", "numba [s]", "numpy [s]", "speedup")
    print(header)
    print("-" * len(header))
    for label, fn in cases:
        results = {}
        times = {}
        for b in backends:
            with use_backend(b):
                results[b], times[b] = timed(fn)
        if len(set(repr(r) for r in results.values())) != 1:
            raise SystemExit("backend mismatch on %s: %r" % (label, results))
        t_nb = times.get("numba")
        t_np = times["numpy"]
        if t_nb is None:
            print("%-32s %12s %12.4f %9s" % (label, "n/a", t_np, "n/a"))
        else:
            print("%-32s %12.4f %12.4f %8.1fx" % (label, t_nb, t_np, t_np / t_nb))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
