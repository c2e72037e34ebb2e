"""Micro-benchmark of the compiled kernels against the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeats 2000]

The same comparison applies end to end: MVF_BACKEND=python forces the
fallback for a whole process, MVF_BACKEND=cython requires the extension.
"""

import argparse
import time

import numpy as np

from mvfapprox import _pykernels
from mvfapprox.sampling import random_spd, rng_from_seed

try:
    from mvfapprox import _fastkernels
except ImportError:
    _fastkernels = None


def best_of(fn, arg, repeats, extra=None):
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        if extra is None:
            for _ in range(repeats):
                fn(arg)
        else:
            for _ in range(repeats):
                fn(arg, extra)
        best = min(best, (time.perf_counter() - t0) / repeats)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=2000)
    args = parser.parse_args()

    if _fastkernels is None:
        print("compiled extension not built; nothing to compare")
        return

    rng = rng_from_seed(42)
    print(f"{'kernel':<10} {'n':>3} {'python':>12} {'cython':>12} {'speedup':>8}")
    for n in (2, 3, 5, 8):
        spd = np.ascontiguousarray(random_spd(n, rng))
        gen = np.ascontiguousarray(rng.standard_normal((n, n)) + 3.0 * np.eye(n))
        rows = [
            ("eigh", _pykernels.eigh, _fastkernels.eigh, spd, None),
            ("qr", _pykernels.qr, _fastkernels.qr, gen, None),
            ("ldu", _pykernels.ldu, _fastkernels.ldu, gen, 1e-12),
            ("cholesky", _pykernels.cholesky, _fastkernels.cholesky, spd, None),
        ]
        for name, py_fn, cy_fn, arg, extra in rows:
            t_py = best_of(py_fn, arg, args.repeats, extra)
            t_cy = best_of(cy_fn, arg, args.repeats, extra)
            print(
                f"{name:<10} {n:>3} {t_py * 1e6:>10.2f}us {t_cy * 1e6:>10.2f}us"
                f" {t_py / t_cy:>7.1f}x"
            )


if __name__ == "__main__":
    main()
