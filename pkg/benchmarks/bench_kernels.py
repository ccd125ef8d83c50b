"""Time the numba and numpy backends of the hot kernels side by side.

    python3 benchmarks/bench_kernels.py [--repeat 5]

JIT compilation is excluded: each kernel runs once before timing.
"""

import argparse
import time

import numpy as np

from sboc import run
from sboc._accel import HAVE_NUMBA
from sboc.bench import get_function
from sboc.clustering import kmeans
from sboc.core import RngStream
from sboc.engine import SbocConfig
from sboc.search import compass_search
from sboc.surrogate import train_rbf


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    g = np.random.default_rng(0)
    X = g.random((60, 4))
    y = np.sin(3 * X).sum(axis=1)
    model = train_rbf(X, y, RngStream(0, "bench"))
    starts = g.random((60, 4))
    pts = g.random((400, 3))
    shcb = get_function(1)

    def compass(b):
        return lambda: compass_search(model, starts, 800, backend=b)

    def lloyd(b):
        return lambda: kmeans(pts, 8, RngStream(1, "km"), backend=b)

    def engine(b):
        return lambda: run(shcb.raw, shcb.domain, SbocConfig(k_max=60, seed=3, backend=b))

    return [("compass search (60 starts, 4-D RBF)", compass),
            ("k-means (400 points, C=8)", lloyd),
            ("full run (SHCB, K_max=60)", engine)]


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    backends = ["numpy", "numba"] if HAVE_NUMBA else ["numpy"]
    print(f"{'kernel':<40}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, make in cases():
        t = [best_time(make(b), args.repeat) for b in backends]
        row = f"{name:<40}" + "".join(f"{v * 1e3:>10.1f}ms" for v in t)
        if len(t) == 2:
            row += f"{t[0] / t[1]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
