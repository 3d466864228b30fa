"""Compare the compiled and numpy closure kernels, and time a full exploration.

    python benchmarks/bench_kernels.py [--sizes 4 8 16 32] [--repeat 200]
"""
import argparse
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from tpnclass import _pykernels

try:
    from tpnclass import _ckernels
except ImportError:
    _ckernels = None

HERE = Path(__file__).resolve().parent
NET = HERE.parent / "tests" / "nets" / "fig2b.net"


def random_matrix(rng, n):
    m = np.full((n, n), _pykernels.INF, dtype=np.int64)
    np.fill_diagonal(m, 1)
    lo = rng.integers(0, 6, size=n)
    hi = lo + rng.integers(0, 6, size=n)
    m[0, 1:] = 2 * -lo[1:] + 1
    m[1:, 0] = 2 * hi[1:] + 1
    return m


def bench_close(mod, mats, repeat):
    t = time.perf_counter()
    for _ in range(repeat):
        for m in mats:
            mod.close(m.copy())
    return (time.perf_counter() - t) / (repeat * len(mats))


def bench_explore(pure, runs=3):
    env = {"TPNCLASS_PURE_PYTHON": "1"} if pure else {}
    code = ("import time, tpnclass.explorer as ex, tpnclass.model as m;"
            f"n = m.load_net({str(NET)!r}); t = time.perf_counter();"
            f"[ex.explore(n, ex.ExploreConfig(reduce='convex-union')) for _ in range({runs})];"
            "print((time.perf_counter() - t) / " f"{runs})")
    out = subprocess.run([sys.executable, "-c", code], env={**os.environ, **env},
                         capture_output=True, text=True, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'n':>4} {'numpy us':>10} {'cython us':>10} {'speedup':>8}")
    for n in args.sizes:
        mats = [random_matrix(rng, n) for _ in range(20)]
        py = bench_close(_pykernels, mats, args.repeat)
        if _ckernels is None:
            print(f"{n:>4} {py * 1e6:>10.1f} {'n/a':>10}")
            continue
        for m in mats:
            a, b = m.copy(), m.copy()
            assert _pykernels.close(a) == _ckernels.close(b) and np.array_equal(a, b)
        cy = bench_close(_ckernels, mats, args.repeat)
        print(f"{n:>4} {py * 1e6:>10.1f} {cy * 1e6:>10.1f} {py / cy:>7.1f}x")
    print()
    print(f"explore fig2b convex-union: numpy {bench_explore(True) * 1e3:.1f} ms", end="")
    if _ckernels is not None:
        print(f", cython {bench_explore(False) * 1e3:.1f} ms")
    else:
        print()


if __name__ == "__main__":
    main()
