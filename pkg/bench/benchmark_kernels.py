"""Timing comparison of the jit-compiled kernels against the numpy paths.

Run twice to see both sides:

    python bench/benchmark_kernels.py
    HPLUS_NO_NUMBA=1 python bench/benchmark_kernels.py

The same seeds drive both runs, so the printed checksums must agree
between them; a mismatch means the two implementations diverged.
"""

import argparse
import os
import time

import numpy as np

from hplus import kernels


def _bench(label, fn, repeat):
    fn()  # warm-up includes any jit compilation
    t0 = time.perf_counter()
    for _ in range(repeat):
        out = fn()
    dt = (time.perf_counter() - t0) / repeat
    checksum = int(np.asarray(out).sum()) % (1 << 31)
    print(f"{label:<44} {dt * 1e3:9.2f} ms   checksum {checksum}")


def bench_howell(rng, rows, cols, modulus, ell, kpow, repeat):
    mat = rng.integers(0, modulus, size=(rows, cols), dtype=np.int64)
    _bench(
        f"howell      {rows}x{cols} mod {modulus}",
        lambda: kernels.howell(mat.copy(), modulus, ell, kpow),
        repeat,
    )


def bench_reduce(rng, rows, cols, modulus, ell, kpow, repeat):
    basis = kernels.howell(
        rng.integers(0, modulus, size=(rows, cols), dtype=np.int64),
        modulus, ell, kpow,
    )
    vec = rng.integers(0, modulus, size=cols, dtype=np.int64)
    _bench(
        f"reduce      {basis.shape[0]}x{cols} mod {modulus}",
        lambda: kernels.reduce_against(vec.copy(), basis, modulus),
        repeat,
    )


def bench_cyclic_mul(rng, d1, d2, modulus, repeat):
    a = rng.integers(0, modulus, size=(d1, d2), dtype=np.int64)
    b = rng.integers(0, modulus, size=(d1, d2), dtype=np.int64)
    _bench(
        f"cyclic_mul  {d1}x{d2} mod {modulus}",
        lambda: kernels.cyclic_mul(a, b, modulus),
        repeat,
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=20240901)
    args = parser.parse_args()

    mode = "numpy fallback" if os.environ.get("HPLUS_NO_NUMBA") else "numba"
    print(f"kernel implementation: {mode}")

    rng = np.random.default_rng(args.seed)
    # shapes drawn from real screening workloads: small escalation cells,
    # a conductor-211 top cell, and a deep modulus
    bench_howell(rng, 72, 36, 3**3, 3, 3, args.repeat)
    bench_howell(rng, 500, 396, 3, 3, 1, args.repeat)
    bench_howell(rng, 1260, 1260, 7, 7, 1, max(1, args.repeat // 5))
    bench_reduce(rng, 300, 396, 9, 3, 2, args.repeat)
    bench_cyclic_mul(rng, 6, 66, 3**4, args.repeat)
    bench_cyclic_mul(rng, 6, 210, 7**2, args.repeat)


if __name__ == "__main__":
    main()
