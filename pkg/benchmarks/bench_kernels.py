"""Time the numba loop kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is warmed up once (numba compiles or loads its cache), then
timed as the best of ``--repeat`` calls.  Outputs are checked for agreement.
"""
import argparse
import time

import numpy as np

from rttstats import _accel, kernels
from rttstats.rng import make_rng


def best_of(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    rng = make_rng(1)
    n = 10000
    picks = rng.integers(1, n + 1, size=20000, dtype=np.int64)
    perm = rng.permutation(n).astype(np.int64) + 1
    return [
        ("rtt_deck", (picks, n), "n=1e4, r=2e4"),
        ("count_distinct", (picks, n), "n=1e4, r=2e4"),
        ("count_inversions", (perm,), "n=1e4"),
        ("occupancy_pmf", (2000, 20000), "n=2e3, r=2e4"),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<18}{'case':<16}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for name, call_args, label in cases():
        loop, vec = kernels.IMPLEMENTATIONS[name]
        t_jit, out_jit = best_of(_accel.njit(loop), call_args, args.repeat)
        t_np, out_np = best_of(vec, call_args, args.repeat)
        if isinstance(out_jit, tuple):
            same = all(np.array_equal(a, b) for a, b in zip(out_jit, out_np))
        else:
            same = np.allclose(out_jit, out_np, rtol=1e-12, atol=1e-250)
        flag = "" if same else "  MISMATCH"
        print(f"{name:<18}{label:<16}{t_jit * 1e3:>10.3f}{t_np * 1e3:>10.3f}{t_np / t_jit:>8.1f}x{flag}")


if __name__ == "__main__":
    main()
