"""Benchmark the compiled trajectory kernel against the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [n_jumps]
"""

import os
import sys
import time

import numpy as np

from commnet.config import ExperimentConfig
from commnet.mobility import backend_name, simulate_imm, simulate_rwp

try:
    from commnet import _trajkernel
except ImportError:
    _trajkernel = None


def run(label, fn, repeats=3):
    best = min(_time(fn) for _ in range(repeats))
    print(f"  {label:<28} {best:8.3f} s")
    return best


def _time(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main():
    n_jumps = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    cfg = ExperimentConfig()
    layout = cfg.layout()
    params = cfg.imm_params()
    print(f"trajectory kernels, {n_jumps:,} jumps (active backend: {backend_name()})")

    if _trajkernel is None:
        print("compiled kernel not built; only the fallback is benchmarked")
    else:
        t_imm_c = run("exploration/return, compiled",
                      lambda: simulate_imm(params, layout, n_jumps, 1))
        t_rwp_c = run("random waypoint, compiled",
                      lambda: simulate_rwp(5.0, cfg.wait_out(), layout, n_jumps, 1))

    os.environ["COMMNET_PURE"] = "1"
    try:
        t_imm_p = run("exploration/return, python",
                      lambda: simulate_imm(params, layout, n_jumps, 1))
        t_rwp_p = run("random waypoint, python",
                      lambda: simulate_rwp(5.0, cfg.wait_out(), layout, n_jumps, 1))
    finally:
        del os.environ["COMMNET_PURE"]

    if _trajkernel is not None:
        print(f"  speedup: {t_imm_p / t_imm_c:.1f}x (exploration/return), "
              f"{t_rwp_p / t_rwp_c:.1f}x (random waypoint)")
        a = simulate_imm(params, layout, 10000, 2)
        os.environ["COMMNET_PURE"] = "1"
        try:
            b = simulate_imm(params, layout, 10000, 2)
        finally:
            del os.environ["COMMNET_PURE"]
        identical = all(
            np.array_equal(getattr(a, f), getattr(b, f))
            for f in ("loc_x", "loc_y", "dest", "kind", "pause_s", "travel_s")
        )
        print(f"  backends bit-identical on a shared seed: {identical}")


if __name__ == "__main__":
    main()
