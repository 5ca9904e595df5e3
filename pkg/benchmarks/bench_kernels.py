"""Time the sign kernels: compiled backend against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--max-n 8] [--repeat 3]
"""

import argparse
import random
import timeit

from hilbext import _pykernels
from hilbext.sign_combinatorics import Permutation

try:
    from hilbext import _speedups
except ImportError:
    _speedups = None


def workloads(max_n, rng):
    sigmas = [Permutation.random(max_n, rng).zero_based() for _ in range(200)]
    perms = [list(rng.sample(range(12), 12)) for _ in range(2000)]
    degs = [[rng.randint(0, 3) for _ in range(12)] for _ in range(2000)]
    return {
        f"d_squared_violations(n={max_n})": lambda k: k.d_squared_violations(max_n),
        f"equivariance_violations(n={max_n}) x200": lambda k: [k.equivariance_violations(s, max_n) for s in sigmas],
        "koszul_sign(len 12) x2000": lambda k: [k.koszul_sign(p, d) for p, d in zip(perms, degs)],
        "perm_sign(len 12) x2000": lambda k: [k.perm_sign(p) for p in perms],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = [("python", _pykernels)] + ([("cython", _speedups)] if _speedups else [])
    if _speedups is None:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'workload':44s}" + "".join(f"{name:>12s}" for name, _ in backends) + ("     speedup" if _speedups else ""))
    for title, fn in workloads(args.max_n, random.Random(0)).items():
        times = [min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for _, mod in backends]
        row = f"{title:44s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
