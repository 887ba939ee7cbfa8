"""Compiled kernel against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import time

import numpy as np

from metricext import _kernels_py
from metricext.generate import random_instance
from metricext.operators import ExtensionContext
from metricext.space import instance_from_dict

try:
    from metricext import _kernels as compiled
except ImportError:
    compiled = None


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--n", type=int, default=30)
    parser.add_argument("--x", type=int, default=6)
    args = parser.parse_args()
    if compiled is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation` first")

    rng = np.random.default_rng(0)
    inst = instance_from_dict(random_instance(rng, args.n, args.x, dim=2))
    ctx = ExtensionContext.from_instance(inst)
    table, sym = ctx._table(inst.p, "base-diagonal")
    levels = range(1, min(ctx.level, ctx.mesh.discrete_level + 2) + 1)
    encodings = [ctx.level_encoding(n) for n in levels]
    print(f"instance: n={args.n}, |X|={args.x}, stabilization index {ctx.level}")

    for name, impl in (("cython", compiled), ("python", _kernels_py)):
        def run(impl=impl):
            for enc in encodings:
                impl.integrate_all(enc.offsets, enc.ends, enc.labels, table, sym)
        t = best_of(run, args.repeat)
        print(f"  integrate_all over {len(encodings)} levels  {name:<7} {t * 1e3:9.2f} ms")

    import metricext.kernels as kernels
    for name, impl in (("cython", compiled), ("python", _kernels_py)):
        kernels.integrate_all = impl.integrate_all
        fresh = ExtensionContext.from_instance(inst)
        fresh.extend_T(inst.p)  # warm the per-level encodings
        t = best_of(lambda: fresh.extend_T(inst.p), args.repeat)
        print(f"  extend_T ({ctx.level} levels)               {name:<7} {t * 1e3:9.2f} ms")


if __name__ == "__main__":
    main()
