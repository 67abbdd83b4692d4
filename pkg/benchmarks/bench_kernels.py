#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy reference backend.

Usage: python benchmarks/bench_kernels.py [--keys J_7_3,halfH_8_2,Her_3_2]

Measures the three hot kernels (all-pairs BFS, exhaustive intersection-number
certification, per-pair shell statistics) on catalogue graphs and prints a
speedup table.  Both backends are exercised through the same entry points,
so this doubles as an agreement check.
"""

import argparse
import time

from nortonlab._kernels import _core  # noqa: F401  (fails fast if not built)
from nortonlab._kernels import reference
from nortonlab.families import catalogue_by_key, construct

try:
    from nortonlab._kernels import _core as compiled
except ImportError:
    compiled = None

DEFAULT_KEYS = "J_7_3,halfH_8_2,Her_3_2,halffoldH_12_2"


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--keys", default=DEFAULT_KEYS)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        raise SystemExit("compiled kernels are not built; run pip install -e .")

    print(f"{'graph':18s} {'n':>5s} {'kernel':14s} {'compiled':>10s} "
          f"{'reference':>10s} {'speedup':>8s}")
    for key in args.keys.split(","):
        spec = catalogue_by_key()[key]
        g = construct(spec)
        rows = []
        d_c, t = timed(compiled.bfs_all, g.n, g.indptr, g.indices, repeat=args.repeat)
        d_r, t2 = timed(reference.bfs_all, g.n, g.indptr, g.indices, repeat=args.repeat)
        assert (d_c == d_r).all()
        rows.append(("bfs_all", t, t2))
        D = int(d_c.max())
        p_c, tp = timed(compiled.p_tensor, d_c, D, repeat=args.repeat)
        p_r, tp2 = timed(reference.p_tensor, d_c, D, repeat=args.repeat)
        assert (p_c[0] == p_r[0]).all()
        rows.append(("p_tensor", tp, tp2))
        s_c, ts_ = timed(compiled.shell_stats, g.n, g.indptr, g.indices, d_c, D,
                         repeat=args.repeat)
        s_r, ts2 = timed(reference.shell_stats, g.n, g.indptr, g.indices, d_c, D,
                         repeat=args.repeat)
        assert all((s_c[k] == s_r[k]).all() for k in s_c)
        rows.append(("shell_stats", ts_, ts2))
        for name, tc, tr in rows:
            print(f"{key:18s} {g.n:5d} {name:14s} {tc:9.3f}s {tr:9.3f}s "
                  f"{tr / max(tc, 1e-9):7.1f}x")


if __name__ == "__main__":
    main()
