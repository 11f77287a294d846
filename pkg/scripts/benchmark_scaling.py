#!/usr/bin/env python3
"""Wall-time scaling of the row-sum score computation with graph size.

Generates sparse ER graphs at increasing node counts, times the Krylov
row-sum scoring (best of a few repetitions), and fits a log-log power law.

Usage:
    python scripts/benchmark_scaling.py [--sizes 1000,10000,100000] [--repeats 3]
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from communifind import GraphGenSpec, generate, total_communicability


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="1000,10000,100000",
                        help="comma-separated node counts")
    parser.add_argument("--avg-degree", type=float, default=4.0)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args(argv)

    sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    seconds = []
    print(f"{'n':>8} {'edges':>9} {'gen secs':>9} {'score secs':>11}")
    for n in sizes:
        t0 = time.perf_counter()
        g = generate(GraphGenSpec(model="er", n=n, avg_degree=args.avg_degree, seed=args.seed))
        gen_secs = time.perf_counter() - t0
        best = min(
            _timed(total_communicability, g) for _ in range(max(1, args.repeats))
        )
        seconds.append(best)
        print(f"{n:>8} {g.edge_count:>9} {gen_secs:>9.4f} {best:>11.4f}")

    if len(sizes) >= 2:
        exponent = float(np.polyfit(np.log(sizes), np.log(seconds), 1)[0])
        print(f"fitted power-law exponent: {exponent:.3f}")
    return 0


def _timed(fn, *args) -> float:
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


if __name__ == "__main__":
    sys.exit(main())
