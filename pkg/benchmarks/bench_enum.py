"""Time the compiled and pure-Python enumeration kernels on the same plans.

    python benchmarks/bench_enum.py [--repeat 3]
"""

import argparse
import time

from quadtmf import lattice
from quadtmf.bilform import direct_sum, named_form

CASES = [
    ("A2, norm <= 60", lambda: named_form("A2"), 60),
    ("D4, norm <= 12", lambda: named_form("D4"), 12),
    ("E8, norm <= 8", lambda: named_form("E8"), 8),
    ("E8, norm <= 12", lambda: named_form("E8"), 12),
    ("E8+A2, norm <= 8", lambda: direct_sum(named_form("E8"), named_form("A2")), 8),
]


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    have_cython = lattice.BACKEND == "cython"
    if not have_cython:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'case':<20} {'vectors':>10} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for label, make, bound in CASES:
        g = make().gram
        tp, hp = _time(lambda: lattice.norm_histogram(g, bound, backend="python"), args.repeat)
        count = sum(hp.values())
        if have_cython:
            tc, hc = _time(lambda: lattice.norm_histogram(g, bound, backend="cython"), args.repeat)
            if hc != hp:
                raise SystemExit(f"{label}: kernels disagree")
            print(f"{label:<20} {count:>10} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")
        else:
            print(f"{label:<20} {count:>10} {tp:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
