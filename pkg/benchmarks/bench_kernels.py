"""Compare the compiled and numpy kernels on the ridge scan and OLS fits.

Usage: python benchmarks/bench_kernels.py [--grid-n 101] [--n 100] [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from dualclock import _kernels_py

try:
    from dualclock import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid-n", type=int, default=101)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    x = np.arange(args.n, dtype=float)
    y = 1.0001 * (x + 0.002) + 0.003 + rng.normal(0.0, 1e-6, args.n)
    grid = np.linspace(-0.01, 0.01, args.grid_n)

    backends = {"python": _kernels_py}
    if _kernels_cy is not None:
        backends["cython"] = _kernels_cy
    else:
        print("compiled kernels not built; timing the numpy fallback only")

    print(f"ridge scan {args.grid_n}x{args.grid_n}, n={args.n}; OLS n={args.n} (best of {args.repeat})")
    timings = {}
    for name, impl in backends.items():
        ridge = min(timeit.repeat(lambda: impl.ridge_sse(x, y, grid, grid), number=1, repeat=args.repeat))
        ols = min(timeit.repeat(lambda: impl.ols_centered(x, y), number=1000, repeat=args.repeat)) / 1000
        timings[name] = (ridge, ols)
        print(f"  {name:7s} ridge {ridge * 1e3:9.3f} ms   ols {ols * 1e6:8.2f} us")
    if len(timings) == 2:
        r = timings["python"][0] / timings["cython"][0]
        o = timings["python"][1] / timings["cython"][1]
        print(f"  speedup: ridge x{r:.1f}, ols x{o:.1f}")


if __name__ == "__main__":
    main()
