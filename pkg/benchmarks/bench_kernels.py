"""Compare the numba and numpy kernel backends on lasso acceptance.

Usage: python benchmarks/bench_kernels.py [formula] [max_prefix] [max_period]
"""

import sys
import time

import numpy as np

from ltlrabin import kernels
from ltlrabin.dra import kernel_arrays
from ltlrabin.oracle import lasso_batches
from ltlrabin.pipeline import run_pipeline


def timed(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv):
    text = argv[1] if len(argv) > 1 else "(G F a -> G F b) & (G F c -> G F b)"
    p = int(argv[2]) if len(argv) > 2 else 3
    q = int(argv[3]) if len(argv) > 3 else 4
    res = run_pipeline(text)
    trans, init, fin, inf, owner = kernel_arrays(res.dra)
    batches = list(lasso_batches(res.alphabet, p, q))
    n = sum(len(pre) for pre, _ in batches)

    def accept_all():
        return [kernels.accept(trans, init, pre, per, fin, inf, owner, False).sum() for pre, per in batches]

    rng = np.random.default_rng(0)
    ua = rng.random((200_000, p + q)) < 0.7
    ub = rng.random((200_000, p + q)) < 0.1

    def until_all():
        return int(kernels.until(ua, ub, p).sum())

    print(f"formula: {text}  dra={res.dra.size()}  lassos={n}")
    for label, fn, count in (("accept", accept_all, n), ("until", until_all, len(ua))):
        out = {}
        for name in kernels.BACKENDS:
            prev = kernels.set_backend(name)
            try:
                fn()  # warm-up, includes jit compilation
                out[name] = (timed(fn), fn())
            finally:
                kernels.set_backend(prev)
        assert out["numba"][1] == out["numpy"][1], f"{label}: backends disagree"
        for name, (secs, _) in out.items():
            print(f"  {label:6s} {name:6s} {secs * 1000:9.1f} ms  {count / secs / 1e6:7.2f} M lassos/s")


if __name__ == "__main__":
    main(sys.argv)
