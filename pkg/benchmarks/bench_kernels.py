"""Time the exact kernels on the gmpy2 backend and the pure-Python fallback.

    python benchmarks/bench_kernels.py [--size 40] [--repeat 3]
"""

import argparse
import random
import time
from fractions import Fraction

from grovekit import _backend
from grovekit.exact import det, inverse, pfaffian
from grovekit.network import cs_graph, response_matrix


def random_matrix(n, rng):
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)] for _ in range(n)]


def random_skew(n, rng):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            m[j][i] = -m[i][j]
    return m


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    a = random_matrix(args.size, rng)
    s = random_skew(args.size, rng)
    cases = {
        "det": lambda: det(a),
        "inverse": lambda: inverse(a),
        "pfaffian": lambda: pfaffian(s),
        "response cs_graph(6)": lambda: response_matrix(cs_graph(6)),
    }
    backends = ["python"] + (["gmpy2"] if _backend.gmpy2 is not None else [])
    print(f"{'kernel':24}" + "".join(f"{b:>12}" for b in backends))
    results = {}
    for name, fn in cases.items():
        row = []
        for b in backends:
            _backend.use(b)
            row.append(best_of(fn, args.repeat))
        results[name] = row
        print(f"{name:24}" + "".join(f"{t:11.4f}s" for t in row))
    _backend.use(backends[-1])
    return results


if __name__ == "__main__":
    main()
