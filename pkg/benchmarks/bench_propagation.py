"""Benchmark: compiled ring-propagation kernel vs the pure-Python twin.

The fixed-step integration of the probe log-amplitude is the hot loop of
every sweep command (each sweep point re-integrates the ring, twice per
direction plus the convergence halving).  This script times both backends
on identical workloads and checks they agree bit for bit.

Run:  python benchmarks/bench_propagation.py
"""

import math
import time

import numpy as np

from slowgyro import _ringprop_py

try:
    from slowgyro import _ringprop
except ImportError:
    _ringprop = None

# representative medium: xi = 10, a = 5, s0 = 1/3, earth rotation on a
# 1.5 mm ring probed at 780 nm
LOSS = 53.0          # gamma13 * tan^2(theta) / c, 1/m
PREF = 2.95e-9       # k_p * Omega * R / c, rad/m
TAN2 = 5.1e9
RC2 = 1.0e12
VREC_C = 1.963e-11
GATE = 1.0
Y0 = complex(math.log(math.sqrt(RC2 / 3.0)), 0.0)


def run(kernel, n_steps, h, repeats):
    best = math.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = kernel.integrate(Y0, h, n_steps, LOSS, PREF, TAN2, RC2,
                                  VREC_C, GATE)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    length = 2.0 * math.pi * 1.5e-3
    cases = [(255, 40), (2047, 15), (16383, 5)]
    print(f"{'steps':>8} {'python':>12} {'cython':>12} {'speedup':>9}")
    for n_steps, repeats in cases:
        h = length / n_steps
        t_py, res_py = run(_ringprop_py, n_steps, h, repeats)
        if _ringprop is None:
            print(f"{n_steps:>8} {t_py * 1e3:>10.3f}ms {'n/a':>12} {'n/a':>9}")
            continue
        t_cy, res_cy = run(_ringprop, n_steps, h, repeats)
        if not np.array_equal(res_py[0], res_cy[0]):
            raise AssertionError("backends disagree")
        print(f"{n_steps:>8} {t_py * 1e3:>10.3f}ms {t_cy * 1e3:>10.3f}ms "
              f"{t_py / t_cy:>8.1f}x")
    if _ringprop is None:
        print("\ncompiled kernel not built; showing pure-Python times only")
    else:
        print("\nbackends agree bit for bit on all cases")


if __name__ == "__main__":
    main()
