"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 30 60 120] [--repeat 3]

Inputs are reduced Laplacians of random regular-ish multigraphs, which is
what the kernels see in practice.  Results of the two backends are checked
for equality before timings are reported.
"""

import argparse
import time

import numpy as np

from cayley_iwasawa.kernels import _pykernels

try:
    from cayley_iwasawa.kernels import _ckernels
except ImportError:
    _ckernels = None

P = 2147483629


def laplacian(n, rng):
    A = rng.integers(0, 3, (n, n))
    A = np.triu(A, 1)
    A = A + A.T
    L = np.diag(A.sum(1)) - A
    return L[1:, 1:].astype(np.int64)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[30, 60, 120])
    ap.add_argument("--batch", type=int, default=32, help="matrices per det_mod_batch call")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; only the fallback can be timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<14}{'n':>6}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for n in args.sizes:
        L = laplacian(n, rng)
        stack = np.stack([L + k * np.eye(n - 1, dtype=np.int64) for k in range(args.batch)])
        cases = [
            ("det_mod_batch", lambda m: m.det_mod_batch(stack, P)),
            ("local_smith", lambda m: m.local_smith(L, 2, 20)),
        ]
        for name, call in cases:
            tp, outp = best_of(lambda: call(_pykernels), args.repeat)
            if _ckernels is None:
                print(f"{name:<14}{n:>6}{tp:>12.4f}{'-':>12}{'-':>10}")
                continue
            tc, outc = best_of(lambda: call(_ckernels), args.repeat)
            same = (np.asarray(outp) == np.asarray(outc)).all() if outp is not None else outc is None
            if not same:
                raise SystemExit(f"{name} n={n}: backends disagree")
            print(f"{name:<14}{n:>6}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
