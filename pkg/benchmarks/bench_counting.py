#!/usr/bin/env python3
"""Benchmark the compiled counting kernel against the pure-Python fallback.

Runs identical workloads through both ScanTables implementations and prints
a table of timings.  Representative of the three counting regimes:

  * chain build: walking the multiplicative group to get the square bitmap
    and (small fields) the exp/log/Zech tables;
  * solve lane: the discriminant walk used when the chart is quadratic in y
    (all the corpus cubics);
  * yscan lane: the literal double scan used for the quartic.

Usage: python3 benchmarks/bench_counting.py [--full]
"""

import argparse
import sys
import time

from hilbzeta import _purecount
from hilbzeta.counting import KernelField, affine_count, clear_cache

try:
    from hilbzeta import _fastcount
except ImportError:
    _fastcount = None

CONIC = {(0, 1): 1, (2, 0): 4}  # y - x^2 over F_5: closed form
CUSP = {(0, 2): 1, (3, 0): 4, (0, 0): 1}  # y^2 - x^3 + 1: solve lane
QUARTIC = {(0, 4): 1, (4, 0): 1, (1, 1): 1}  # x^4 + y^4 + xy: yscan lane


def timed(fn):
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


def bench_lane(impl, name, p, n, terms):
    clear_cache()
    kf = KernelField(p, n, impl=impl)
    return timed(lambda: affine_count(kf, terms))


def bench_build(impl, p, n):
    clear_cache()

    def build():
        kf = KernelField(p, n, impl=impl)
        kf.tables()
        return kf.q

    return timed(build)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--full",
        action="store_true",
        help="include the large-field workloads (minutes on the pure lane)",
    )
    args = parser.parse_args(argv)

    workloads = [
        ("chain build F_5^6 (15625)", bench_build, (5, 6), None),
        ("chain build F_3^8 (6561)", bench_build, (3, 8), None),
        ("conic count F_5^6 (closed form)", bench_lane, (5, 6), CONIC),
        ("cusp count F_7^4 (solve lane)", bench_lane, (7, 4), CUSP),
        ("cusp count F_5^6 (solve lane)", bench_lane, (5, 6), CUSP),
        ("quartic count F_3^5 (yscan 243^2)", bench_lane, (3, 5), QUARTIC),
    ]
    if args.full:
        workloads += [
            ("chain build F_5^10 (9.77M)", bench_build, (5, 10), None),
            ("cusp count F_5^10 (solve lane)", bench_lane, (5, 10), CUSP),
            ("quartic count F_3^7 (yscan 2187^2)", bench_lane, (3, 7), QUARTIC),
        ]

    impls = [("pure", _purecount)]
    if _fastcount is not None:
        impls.insert(0, ("fast", _fastcount))
    else:
        print("compiled kernel not available; benchmarking the pure lane only")

    header = f"{'workload':40}" + "".join(f"{name:>12}" for name, _ in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, fn, (p, n), terms in workloads:
        times = []
        values = []
        for _, impl in impls:
            if fn is bench_build:
                value, dt = fn(impl, p, n)
            else:
                value, dt = fn(impl, label, p, n, terms)
            times.append(dt)
            values.append(value)
        if len(set(values)) != 1:
            print(f"!! lanes disagree on {label}: {values}")
            return 1
        row = f"{label:40}" + "".join(f"{dt:>11.4f}s" for dt in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:>9.1f}x"
        print(row)
    clear_cache()
    return 0


if __name__ == "__main__":
    sys.exit(main())
