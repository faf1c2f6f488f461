"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both paths are called explicitly via ``use_numba=``, so the environment flag
does not matter here. The first numba call (compilation) is reported apart.
"""
import argparse
import time

import numpy as np

from sattrack import MountConfig, generate_synthetic_pass, profile_A, simulate
from sattrack import _accel
from sattrack.kernels import window_range


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cfg = MountConfig()
    traj = generate_synthetic_pass(83, altitude=420.0, sample_step=1.0, min_el=10.0)
    prof = profile_A(cfg)
    lp = np.random.default_rng(0).exponential(2.0, 120_000)

    cases = {
        f"simulate ({traj.duration:.0f} s pass, 5 ms step)":
            lambda nb: simulate(traj, cfg, prof, use_numba=nb),
        "window_range (120k samples, 201-sample window)":
            lambda nb: window_range(lp, 201, 1, use_numba=nb),
    }
    print(f"numba available: {_accel.HAVE_NUMBA}")
    for name, fn in cases.items():
        t_np = best_of(lambda: fn(False), args.repeat)
        line = f"{name:50s} numpy {t_np * 1e3:8.2f} ms"
        if _accel.HAVE_NUMBA:
            t0 = time.perf_counter()
            fn(True)
            first = time.perf_counter() - t0
            t_nb = best_of(lambda: fn(True), args.repeat)
            line += (f" | numba {t_nb * 1e3:8.2f} ms (first call {first:.2f} s)"
                     f" | speed-up {t_np / t_nb:5.1f}x")
        print(line)


if __name__ == "__main__":
    main()
