"""Compare the compiled kernels with the NumPy fallback.

Usage::

    python benchmarks/bench_kernels.py [--sizes 100x200,150x600] [--repeat 5]

Prints one line per (kernel, size) with the best-of-``repeat`` time of each
backend, the speedup, and the max absolute difference between their outputs.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from pvdcov import _pykernels

try:
    from pvdcov import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _inputs(n: int, p: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, p))
    mean = x.mean(axis=0)
    sigma = (x - mean).T @ (x - mean) / n
    at = np.ascontiguousarray(x.T)
    offset = np.ascontiguousarray(np.outer(mean, mean) + sigma)
    tau = np.full((p, p), 0.1)
    mask = np.ones((p, p), dtype=np.uint8)
    return {
        "theta": (at, offset),
        "row_energy": (sigma,),
        "threshold": (sigma, tau, mask, True, True),
    }


def _kernel(module, name):
    return getattr(module, f"{name}_kernel")


def bench(sizes, repeat: int):
    rows = []
    for n, p in sizes:
        args = _inputs(n, p)
        for name, a in args.items():
            py = _kernel(_pykernels, name)
            t_py = min(timeit.repeat(lambda: py(*a), number=1, repeat=repeat))
            if _ckernels is None:
                rows.append((name, n, p, t_py, float("nan"), float("nan"), float("nan")))
                continue
            c = _kernel(_ckernels, name)
            t_c = min(timeit.repeat(lambda: c(*a), number=1, repeat=repeat))
            diff = float(np.max(np.abs(np.asarray(c(*a)) - np.asarray(py(*a)))))
            rows.append((name, n, p, t_py, t_c, t_py / t_c, diff))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sizes", default="100x200,150x600,150x1000", help="comma-separated n x p pairs")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    sizes = [tuple(int(v) for v in s.split("x")) for s in args.sizes.split(",")]
    if _ckernels is None:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':<11} {'n':>5} {'p':>5} {'python s':>10} {'cython s':>10} {'speedup':>8} {'max |diff|':>11}")
    for name, n, p, t_py, t_c, speed, diff in bench(sizes, args.repeat):
        print(f"{name:<11} {n:>5} {p:>5} {t_py:>10.4f} {t_c:>10.4f} {speed:>8.2f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
