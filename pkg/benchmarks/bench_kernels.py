"""Timing comparison of the numba kernels against the numpy fallback.

Run twice to compare the two paths:

    python3 benchmarks/bench_kernels.py
    HYPFLUCT_NO_NUMBA=1 python3 benchmarks/bench_kernels.py

The first invocation with numba enabled includes JIT compilation in the
warmup pass, which is excluded from the timings.
"""

import argparse
import math
import time

import numpy as np

from hypfluct import kernels
from hypfluct.hyperbolic import ball_kappa


def _time(fn, repeats):
    fn()  # warmup (and JIT compile on the numba path)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2_000_000,
                        help="number of sample points per kernel call")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    R = 5.0
    s = rng.uniform(-R, R, size=args.n)
    offsets = np.linspace(0, args.n, 10_001).astype(np.int64)

    path = "numba" if kernels.USE_NUMBA else "numpy"
    print(f"kernel path: {path} (n={args.n}, best of {args.repeats})")

    for d, lam in ((2, 0.0), (4, 0.5), (4, 1.0)):
        mu = math.sqrt(1.0 - lam * lam)
        delta = math.atanh(lam) if lam < 1.0 else 0.0
        kappa = ball_kappa(d - 1)
        dt = _time(lambda: kernels.section_volumes(s, R, d, lam, mu, delta, kappa),
                   args.repeats)
        print(f"  section_volumes d={d} lam={lam}: {dt * 1e3:8.2f} ms "
              f"({args.n / dt / 1e6:.1f} Mpts/s)")

    vol = kernels.section_volumes(s, R, 4, 0.0, 1.0, 0.0, ball_kappa(3))
    dt = _time(lambda: kernels.signed_sums(vol, s, offsets), args.repeats)
    print(f"  signed_sums (10^4 replicates):  {dt * 1e3:8.2f} ms")

    h = np.cosh(np.abs(s)) ** -2.0
    dt = _time(lambda: kernels.zeta_increment_sums(h, offsets), args.repeats)
    print(f"  zeta_increment_sums:            {dt * 1e3:8.2f} ms")


if __name__ == "__main__":
    main()
