"""Time the int64 PQa kernels compiled by numba against their pure-Python bodies.

    python3 benchmarks/bench_pqa.py [--lo 2] [--hi 200000] [--big 5]
"""

import argparse
import time

import numpy as np

from pscf import _accel, kernels


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo", type=int, default=2)
    ap.add_argument("--hi", type=int, default=200_000)
    ap.add_argument("--big", type=int, default=5, help="number of ~2^60 radicands")
    args = ap.parse_args()

    ds = np.arange(args.lo, args.hi, dtype=np.int64)
    budget = 10**6
    py_one = _accel.python_impl(kernels.period_length64)

    def py_lengths(values, steps):
        # pure-Python all the way down; period_lengths64.py_func would still call the jitted kernel
        return np.array([py_one(d, steps) for d in values], dtype=np.int64)

    print(f"numba enabled: {_accel.ENABLED}")

    if _accel.ENABLED:
        kernels.period_lengths64(ds[:10], budget)  # compile outside the timing
        fast, t_fast = timed(kernels.period_lengths64, ds, budget)
    slow, t_slow = timed(py_lengths, ds, budget)
    print(f"period lengths, D in [{args.lo}, {args.hi}):  python {t_slow:8.3f}s", end="")
    if _accel.ENABLED:
        assert np.array_equal(fast, slow)
        print(f"  numba {t_fast:8.3f}s  speedup x{t_slow / t_fast:.1f}")
    else:
        print()

    # radicands near 2^60 have periods far beyond any budget: time a fixed number of steps
    steps = 10**6
    rng = np.random.default_rng(0)
    big = rng.integers(1 << 59, 1 << 60, size=args.big, dtype=np.int64)
    for d in big:
        slow1, t1 = timed(py_one, d, steps)
        line = f"D={int(d)}: {steps} steps  python {steps / t1 / 1e6:6.2f} Msteps/s"
        if _accel.ENABLED:
            fast1, t2 = timed(kernels.period_length64, d, steps)
            assert fast1 == slow1
            line += f"  numba {steps / t2 / 1e6:7.2f} Msteps/s  speedup x{t1 / t2:.0f}"
        print(line)


if __name__ == "__main__":
    main()
