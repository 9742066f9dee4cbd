"""Benchmark: compiled orbit kernel vs the pure-numpy fallback.

The dense orbit partition over p^d indices is the hot loop behind orbit
censuses, conjugacy classes of Lazard groups, and base-change towers.
Run:  python benchmarks/bench_orbits.py
"""

import time

import numpy as np

from nilorbit import kernels
from nilorbit.battery import appendix_h2_ring, witness_ring
from nilorbit.families import fake_heisenberg_scheme, ul_lie_scheme


def cases():
    yield "H.2 ring dual, 5^4", appendix_h2_ring(5).coadjoint_generators(), 5
    yield "class-4 witness dual, 5^5", witness_ring(5, 4).coadjoint_generators(), 5
    yield "UL4(F5) dual, 5^6", ul_lie_scheme(4, 5).at_level(1).coadjoint_generators(), 5
    fh4 = fake_heisenberg_scheme(5, 1).at_level(4)
    yield "fake Heisenberg level 4, 5^8", fh4.coadjoint_generators(), 5
    fh3 = fake_heisenberg_scheme(3, 1).at_level(6)
    yield "fake Heisenberg level 6, 3^12", fh3.coadjoint_generators(), 3


def run_one(mats, p, backend, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = kernels.orbit_partition(mats, p, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    backends = ["python"]
    try:
        kernels._select("c")
        backends.append("c")
    except RuntimeError:
        print("compiled kernel not built; benchmarking the fallback only")
    print("%-34s %12s %12s %9s" % ("case", "python (s)", "c (s)", "speedup"))
    for name, mats, p in cases():
        times = {}
        results = {}
        for b in backends:
            times[b], results[b] = run_one(np.asarray(mats), p, b)
        if len(backends) == 2:
            assert (results["python"] == results["c"]).all(), "backends disagree"
            print(
                "%-34s %12.3f %12.3f %8.1fx"
                % (name, times["python"], times["c"], times["python"] / times["c"])
            )
        else:
            print("%-34s %12.3f" % (name, times["python"]))


if __name__ == "__main__":
    main()
