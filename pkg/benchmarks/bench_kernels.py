"""Time the numba and numpy paths of each numeric kernel.

Run ``python3 benchmarks/bench_kernels.py``.  Each kernel is called once
before timing so numba compilation is excluded.
"""

import argparse
import time

import numpy as np

from cutfree import _kernels
from cutfree.models import enumerate_psc


def best_of(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    rel = rng.random((120, 120)) < 0.02
    yield "closure 120x120", _kernels.closure_numpy, _kernels.closure_numba, (rel,)

    gens = 7
    gen_leq = np.eye(gens, dtype=bool)
    gen_leq[0, 1] = gen_leq[2, 3] = True
    flags = np.zeros(gens, dtype=bool)
    m = enumerate_psc(4)[-1]
    args = (gen_leq, flags, flags, m.order, m.bottom, m.top)
    yield "maps 7 gens into 4 elements", _kernels.maps_numpy, _kernels.maps_numba, args

    n = 40
    idx = np.arange(n)
    meet = np.minimum(idx[:, None], idx[None, :])
    pcomp = np.where(idx == 0, n - 1, 0)
    args = (meet, pcomp, 0, n - 1)
    yield "law check on 40-chain", _kernels.violations_numpy, _kernels.violations_numba, args


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, slow, fast, fargs in cases(rng):
        a = slow(*fargs)
        b = fast(*fargs)
        assert np.array_equal(a, b), name
        t_np = best_of(slow, fargs, args.repeat)
        t_nb = best_of(fast, fargs, args.repeat)
        print(f"{name:32s} {t_np:10.5f} {t_nb:10.5f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
