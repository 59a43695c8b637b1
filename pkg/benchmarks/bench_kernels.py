"""Time the compiled kernel core against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 200,400,800] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from encomp import _backend, _pykernels
from encomp.bandwidth import GridSpec


def _cases(n):
    rng = np.random.default_rng(n)
    w = rng.normal(size=(n, 1))
    x = rng.normal(size=(n, 1))
    y = rng.normal(size=n)
    hs = GridSpec().constants() * n ** -0.2
    return {
        "kernel_gram": lambda m: m.kernel_gram(w, 0.4, 0),
        "sinc_gram": lambda m: m.sinc_gram(x),
        "grid_sums (25 h)": lambda m: m.grid_sums(w, y, hs, 0),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="200,400,800")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _backend.BACKEND != "compiled":
        raise SystemExit("compiled extension not available; build with `pip install -e . --no-build-isolation`")
    from encomp import _ckernels

    print(f"{'op':<18}{'n':>6}{'compiled ms':>14}{'numpy ms':>12}{'speedup':>9}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, fn in _cases(n).items():
            tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
            tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<18}{n:>6}{tc:>14.3f}{tp:>12.3f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
