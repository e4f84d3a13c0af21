"""Timing of the basis-change crossing map against the entrywise oracle.

    python3 scripts/crossing_speed.py --dims 2 3 4 5 6 --repeats 5
"""

import argparse
import time

import numpy as np

from crosslab.crossing import cross_fast, cross_oracle
from crosslab.sampling import random_involution, random_operator
from crosslab.tensor import rel_residual


def best_time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    r = np.random.default_rng(args.seed)
    print(f"{'N':>2} {'fast [ms]':>10} {'oracle [ms]':>12} {'agreement':>10}")
    for n in args.dims:
        s = random_involution(n, seed=r, spread=1.5)
        t = random_operator(n * n, r)
        fast = best_time(lambda: cross_fast(s, t), args.repeats)
        slow = best_time(lambda: cross_oracle(s, t), args.repeats)
        agree = rel_residual(cross_fast(s, t), cross_oracle(s, t))
        print(f"{n:>2} {1e3 * fast:>10.3f} {1e3 * slow:>12.3f} {agree:>10.1e}")


if __name__ == "__main__":
    main()
