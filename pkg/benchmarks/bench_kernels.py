"""Compare the compiled and pure-Python ray-dynamics kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--samples 1000000]
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

import numpy as np

from torusfill import _pykernels
from torusfill.raydyn import ENCLOSURE_TOL, MAX_ITER, _params
from torusfill.sl2z import random_word

try:
    from torusfill import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeat: int) -> float:
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


def bench(mod, mats, thetas, repeat):
    def disp():
        for p in mats[:8]:
            mod.displacement(p.a, p.b, p.c, p.d, p.offset, thetas)

    def encl():
        for p in mats:
            for sign in (1.0, -1.0):
                mod.enclose_max(p.a, p.b, p.c, p.d, p.offset, sign, ENCLOSURE_TOL, p.slack, MAX_ITER)

    return _time(disp, repeat), _time(encl, repeat)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--matrices", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    mats = [_params(random_word(rng, 10).evaluate()) for _ in range(args.matrices)]
    thetas = np.linspace(0.0, 2 * np.pi, args.samples)

    rows = [("python", *bench(_pykernels, mats, thetas, args.repeat))]
    if _ckernels is not None:
        rows.append(("cython", *bench(_ckernels, mats, thetas, args.repeat)))
    else:
        print("compiled kernels not built; reporting the fallback only")

    print(f"{'backend':<8} {'displacement (8 x %d)' % args.samples:>28} "
          f"{'enclosures (%d x 2)' % args.matrices:>24}")
    for name, d, e in rows:
        print(f"{name:<8} {d * 1e3:>25.1f} ms {e * 1e3:>21.1f} ms")
    if len(rows) == 2:
        print(f"speed-up  {rows[0][1] / rows[1][1]:>25.1f} x {rows[0][2] / rows[1][2]:>21.1f} x")


if __name__ == "__main__":
    main()
