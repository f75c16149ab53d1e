"""Compare the compiled and numpy kernels: ``python benchmarks/bench_kernels.py [--repeat N]``."""

from __future__ import annotations

import argparse
import time

import numpy as np

from repcomp import kernels


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rref(impl, n: int, p: int, repeat: int) -> float:
    rng = np.random.default_rng(0)
    base = rng.integers(0, p, size=(n, n), dtype=np.int64)
    return _best(lambda: impl.rref_modp(base.copy(), p), repeat)


def bench_series(impl, batch: int, repeat: int) -> float:
    p = 5
    exps = np.array([[1, 1, 0], [0, 0, 3]], dtype=np.int64)
    coefs = np.array([1, p - 1], dtype=np.int64)
    eq_index = np.array([0, 0], dtype=np.int64)
    rng = np.random.default_rng(1)
    jets = rng.integers(0, p, size=(batch, 3, 5), dtype=np.int64)
    return _best(lambda: impl.series_coeffs_modp(exps, coefs, eq_index, 1, jets, 4, p), repeat)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    names = ["python"]
    try:
        kernels.get_backend("cython")
        names.append("cython")
    except ImportError:
        print("compiled extension not built; timing the numpy kernels only")
    cases = [(f"rref_modp {n}x{n} p={p}", lambda impl, n=n, p=p: bench_rref(impl, n, p, args.repeat))
             for n, p in [(40, 5), (120, 5), (120, 2 ** 31 - 1)]]
    cases += [(f"series_coeffs batch={b}", lambda impl, b=b: bench_series(impl, b, args.repeat))
              for b in (100, 10000)]
    print(f"{'case':<32}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in cases:
        times = [fn(kernels.get_backend(n)) for n in names]
        row = f"{label:<32}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
