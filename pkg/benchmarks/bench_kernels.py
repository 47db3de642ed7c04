"""Compare the compiled kernels with the numpy fallback.

Run ``python benchmarks/bench_kernels.py``.  Each kernel is timed on both
backends with identical inputs; the maximum relative difference between
the outputs is reported alongside the speed-up.
"""
import argparse
import timeit

import numpy as np

from casimir_modes import _core_py
from casimir_modes.dielectric import make_ohmic_bath

try:
    from casimir_modes import _core
except ImportError:
    _core = None


def _cases(n_grid, n_bath):
    bath = make_ohmic_bath(1.0, 50.0, n_bath, omega_p=10.0)
    wj, rj = bath.omega_j, bath.mass_ratio
    k, xi = np.meshgrid(np.linspace(0.0, 40.0, n_grid), np.linspace(0.0, 40.0, n_grid))
    w = np.linspace(0.05, 30.0, n_grid * n_grid)
    lo = np.linspace(0.6, 0.7, n_grid)
    hi = lo + 0.05
    return {
        "log_g_imag drude": lambda c: c.log_g_imag(k, xi, 1.0, np.inf, True, 1, 10.0, 0.0, 1.0,
                                                   np.zeros(0), np.zeros(0)),
        "log_g_imag bath slab": lambda c: c.log_g_imag(k, xi, 1.0, 1.0, False, 2, 10.0, 0.0,
                                                       0.0, wj, rj),
        "mode_levels bath": lambda c: c.mode_levels(w, 0.5, 1.0, 1.0, True, 10.0, 0.0, wj, rj)[0],
        "solve_levels bath": lambda c: c.solve_levels(lo, hi, np.zeros(n_grid), 0, 0.5, 1.0, 1.0,
                                                      False, 10.0, 0.0, wj, rj),
    }


def _max_rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    ok = np.isfinite(a) & np.isfinite(b)
    scale = np.maximum(np.abs(b[ok]), 1e-300)
    return float(np.max(np.abs(a[ok] - b[ok]) / scale)) if ok.any() else 0.0


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--bath", type=int, default=32)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _core is None:
        print("compiled core not built; run `pip install -e . --no-build-isolation` first")
        return 1
    print(f"{'kernel':<24}{'python ms':>12}{'cython ms':>12}{'speed-up':>10}{'max rel diff':>14}")
    for name, fn in _cases(args.grid, args.bath).items():
        t_py = min(timeit.repeat(lambda: fn(_core_py), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat))
        diff = _max_rel(fn(_core), fn(_core_py))
        print(f"{name:<24}{1e3 * t_py:>12.2f}{1e3 * t_cy:>12.2f}{t_py / t_cy:>10.1f}{diff:>14.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
