"""Compare the compiled and numpy kernels.

    python benchmarks/bench_kernels.py [--n 200000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from dssfade import _pykernels, kernels
from dssfade.constellation import build_qam

try:
    from dssfade import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="observations per decode call")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'q':>4}" + "".join(f"{name:>12}" for name, _ in impls) + f"{'speedup':>10}")
    for q in (4, 16, 64):
        c = build_qam(q, 0.4)
        y = rng.normal(scale=np.sqrt(q), size=(args.n, 2))
        h = np.abs(rng.normal(size=(args.n, 2)))
        times = [best_of(lambda i=impl: kernels.ml_decode(y, h, c.points, impl=i), args.repeat) for _, impl in impls]
        ref = kernels.ml_decode(y, h, c.points, impl=_pykernels)
        for _, impl in impls[1:]:
            assert np.array_equal(kernels.ml_decode(y, h, c.points, impl=impl), ref)
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{'ml_decode':<22}{q:>4}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times) + speed)
    for q in (16, 64):
        c = build_qam(q, 0.4)
        pts = c.points / np.sqrt(c.E_s)
        times = [best_of(lambda i=impl: [kernels.pair_stats(pts, 25.0, impl=i) for _ in range(200)], args.repeat)
                 for _, impl in impls]
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{'pair_stats x200':<22}{q:>4}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times) + speed)
    print(f"active backend: {kernels.BACKEND}")


if __name__ == "__main__":
    main()
