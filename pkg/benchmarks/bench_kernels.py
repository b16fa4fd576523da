"""Time the hot kernels on both backends.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import timeit
from fractions import Fraction

from bookramsey import _backend
from bookramsey.constructions import random_coloring
from bookramsey.interval import certify_no_solution
from bookramsey.search import Schedule, anneal


def cases(k):
    g = random_coloring(600, 0.5, 1)
    rows = g.rows("red")
    sched = Schedule(steps_per_temperature=2000, floor_temperature=0.3)
    return {
        "book_scan n=600": lambda: k.book_scan(rows, g.n),
        "anneal n=30, 48k steps": lambda: anneal(30, 5, 5, schedule=sched, seed=1, kernels=k),
        "exhaustive K_8 (2,2)": lambda: k.exhaustive_search(8, 2, 2),
        "exhaustive K_7 (2,1)": lambda: k.exhaustive_search(7, 2, 1),
        "interval tol=1e-12": lambda: certify_no_solution(Fraction(1, 6), Fraction(1, 4),
                                                          1e-12, kernels=k),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _backend.available()
    timings = {}
    for name, k in backends.items():
        for label, fn in cases(k).items():
            timings[label, name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))
    labels = list(cases(backends["python"]))
    names = list(backends)
    print(f"{'kernel':<26}" + "".join(f"{n:>12}" for n in names)
          + ("     speedup" if len(names) > 1 else ""))
    for label in labels:
        row = [timings[label, n] for n in names]
        line = f"{label:<26}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row)
        if len(row) > 1:
            line += f"{row[0] / row[1]:>11.1f}x"
        print(line)
    if len(names) == 1:
        print("compiled extension not available; only the Python fallback was timed")


if __name__ == "__main__":
    main()
