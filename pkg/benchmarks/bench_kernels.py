"""Compiled vs pure-Python elimination kernels.

Kernel level: pivot search on random rational and float matrices of growing
size, both backends timed in this process. End to end: the sigma0 and
equivalence self-test suites, run in a subprocess per backend so that the
import-time selection is exercised as users see it.

    python benchmarks/bench_kernels.py [--sizes 8 16 32 64] [--repeat 5] [--models 100]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from umvue import _pykernels

try:
    from umvue import _kernels
except ImportError:
    _kernels = None


def rational_matrix(rng, n, rank):
    """``n x n`` matrix of small fractions with the given rank."""
    left = [[Fraction(rng.randint(-4, 4), rng.randint(1, 6)) for _ in range(rank)] for _ in range(n)]
    right = [[Fraction(rng.randint(-4, 4), rng.randint(1, 6)) for _ in range(n)] for _ in range(rank)]
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*right)] for row in left]


def float_matrix(rng, n, rank):
    left = [[rng.gauss(0, 1) for _ in range(rank)] for _ in range(n)]
    right = [[rng.gauss(0, 1) for _ in range(n)] for _ in range(rank)]
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*right)] for row in left]


def small_int_matrix(rng, n):
    return [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_table(sizes, repeat):
    rng = random.Random(1)
    mods = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    print(f"{'kernel':<10}{'n':>5}" + "".join(f"{name:>14}" for name, _ in mods) + f"{'speedup':>10}")
    for n in sizes:
        cases = {
            "int": (small_int_matrix(rng, n), lambda k, a: k.int_pivots(a, n)),
            "rational": (rational_matrix(rng, n, max(1, n // 2)), lambda k, a: k.rational_pivots(a, n)),
            "float": (float_matrix(rng, n, max(1, n // 2)), lambda k, a: k.float_pivots(a, n, 1e-9)),
        }
        for label, (a, call) in cases.items():
            results = {name: call(k, a) for name, k in mods}
            assert len({tuple(r) for r in results.values()}) == 1, f"backends disagree on {label} n={n}"
            times = [best_time(lambda k=k: call(k, a), repeat) for _, k in mods]
            speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else f"{'-':>10}"
            print(f"{label:<10}{n:>5}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times) + speed)


SUITE = """
import random, time
from umvue import BACKEND
from umvue.selftest import model_pool, suite_equivalence, suite_sigma0
pool = model_pool(7, {models}, 7, 4)
t0 = time.perf_counter(); suite_sigma0(pool); t1 = time.perf_counter()
suite_equivalence(pool, random.Random(1), 5); t2 = time.perf_counter()
print(BACKEND, t1 - t0, t2 - t1)
"""


def end_to_end(models):
    print(f"\nend to end, {models} models (|X| <= 7): sigma0 suite, equivalence suite")
    rows = []
    for force_pure in (True, False):
        env = dict(os.environ)
        env.pop("UMVUE_PURE_PYTHON", None)
        if force_pure:
            env["UMVUE_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", SUITE.format(models=models)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        rows.append((out[0], float(out[1]), float(out[2])))
    for name, a, b in rows:
        print(f"  {name:<8} sigma0 {a:7.2f}s   equivalence {b:7.2f}s")
    if rows[0][0] != rows[1][0]:
        print(f"  speedup  sigma0 {rows[0][1] / rows[1][1]:6.2f}x   "
              f"equivalence {rows[0][2] / rows[1][2]:6.2f}x")
    else:
        print("  compiled extension not built; both runs used the Python kernels")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--models", type=int, default=100)
    args = ap.parse_args()
    if _kernels is None:
        print("note: umvue._kernels is not built; only the Python backend is timed")
    kernel_table(args.sizes, args.repeat)
    end_to_end(args.models)


if __name__ == "__main__":
    main()
