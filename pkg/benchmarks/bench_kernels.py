"""Compare the compiled and numpy kernels on full curve construction.

Usage: python3 benchmarks/bench_kernels.py [--sizes 500 1000 2000] [--repeat 3]

The excess:deficit curve is the expensive case: every critical scale (plus
the excess bend points) is evaluated against every record.
"""

import argparse
import timeit

import numpy as np

from ucceval import _backend
from ucceval.curve import build_ucc
from ucceval.data import from_arrays


def dataset(n, seed=0):
    rng = np.random.default_rng(seed)
    y_hat = rng.normal(size=n)
    y = y_hat + rng.normal(size=n)
    zl = rng.uniform(0.2, 2.0, n)
    zu = rng.uniform(0.2, 2.0, n)
    return from_arrays(y, y_hat, zl, zu)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[500, 1000, 2000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the numpy kernels only")
    print(f"{'N':>6} " + " ".join(f"{b:>12}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for n in args.sizes:
        ds = dataset(n)
        times = []
        for b in backends:
            t = min(timeit.repeat(lambda: build_ucc(ds, "excess:deficit", backend=b),
                                  number=1, repeat=args.repeat))
            times.append(t)
        # both backends must agree before their timings mean anything
        if len(backends) > 1:
            cp, cc = (build_ucc(ds, "excess:deficit", backend=b) for b in backends)
            assert np.allclose(cp.y, cc.y, rtol=1e-12, atol=1e-15)
        line = f"{n:>6} " + " ".join(f"{t * 1e3:>10.1f}ms" for t in times)
        if len(times) > 1:
            line += f"   {times[0] / times[1]:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
