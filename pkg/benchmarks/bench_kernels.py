"""Compare the numba and pure-numpy routes of the exact elimination kernel.

Part one times the kernel directly on sparse integer matrices shaped like
the Hom-complex differentials the engine builds. Part two runs a whole
T_X series in two subprocesses, one per value of DERDISC_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py [--sizes 20 60 120] [--n 64]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from derdisc import exactla


def structured_matrix(rng, rows, cols, density=0.08):
    a = np.zeros((rows, cols), dtype=np.int64)
    mask = rng.random((rows, cols)) < density
    a[mask] = rng.choice([-1, 1], size=mask.sum())
    return a


def time_kernel(kernel, mats, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for m in mats:
            kernel(m.copy(), m.shape[1])
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table(sizes, count=20, seed=0):
    rng = np.random.default_rng(seed)
    fast = exactla.rref_kernel(use_numba=True)
    slow = exactla.rref_kernel(use_numba=False)
    if fast is slow:
        print("numba is not available; only the numpy route exists")
        return
    warm = structured_matrix(rng, 4, 4)
    t0 = time.perf_counter()
    fast(warm.copy(), 4)
    print(f"first numba call (compile or cache load): {time.perf_counter() - t0:.3f}s")
    print(f"{'size':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in sizes:
        mats = [structured_matrix(rng, n, n + n // 2) for _ in range(count)]
        # both routes must agree before timing means anything
        for m in mats[:3]:
            r1 = fast(m.copy(), m.shape[1])
            r2 = slow(m.copy(), m.shape[1])
            assert r1[0] == r2[0] and r1[2] == r2[2]
        ts = time_kernel(slow, mats)
        tf = time_kernel(fast, mats)
        print(f"{n:>6} {ts:>10.4f} {tf:>10.4f} {ts / tf:>8.1f}")


SERIES_SNIPPET = """
import time
from derdisc.entropy import series_for
t0 = time.perf_counter()
s = series_for(3, 1, 2, "X^1", {n})
print(time.perf_counter() - t0, sum(sum(v.values()) for _, v in s.samples))
"""


def series_table(n):
    print(f"\nend to end: T_X series on Lambda(3,1,2), n_max={n}")
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, DERDISC_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", SERIES_SNIPPET.format(n=n)], env=env,
                             capture_output=True, text=True, check=True).stdout.split()
        results[flag] = (float(out[0]), int(out[1]))
        label = "numpy" if flag == "1" else "numba"
        print(f"  {label}: {results[flag][0]:.2f}s  (checksum {results[flag][1]})")
    assert results["0"][1] == results["1"][1], "routes disagree"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 60, 120])
    ap.add_argument("--n", type=int, default=64)
    args = ap.parse_args()
    kernel_table(args.sizes)
    series_table(args.n)


if __name__ == "__main__":
    main()
