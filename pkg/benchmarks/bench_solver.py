"""Compare the compiled and pure-Python search kernels.

    python benchmarks/bench_solver.py [--repeat N]
"""

import argparse
import statistics
import time

from kscolor import _pykernels, catalog
from kscolor.geometry import complete_frames
from kscolor.rational import perturb_frames, rational_frames
from kscolor.solver import variable_order

try:
    from kscolor import _ckernels
except ImportError:
    _ckernels = None


def instances():
    for name in catalog.BUILTINS:
        yield name, catalog.builtin(name).directions
    peres = catalog.builtin("peres33").directions
    yield "peres33 completed", complete_frames(peres)
    yield "peres33 perturbed", perturb_frames(complete_frames(peres), 0.02, 0).result
    yield "rational-13", rational_frames(13)
    yield "rational-25", rational_frames(25)


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the Python timings are shown")
    print(f"{'instance':<20} {'n':>5} {'nodes':>7} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, ds in instances():
        call = (len(ds), ds.frames, ds.edges, variable_order(ds))
        py, _, out = best_of(_pykernels.dfs_solve, call, args.repeat)
        if _ckernels is not None:
            cy, _, cout = best_of(_ckernels.dfs_solve, call, args.repeat)
            assert cout == out, name
            tail = f"{cy * 1e3:>10.3f} {py / cy:>7.1f}x"
        else:
            tail = f"{'-':>10} {'-':>8}"
        print(f"{name:<20} {len(ds):>5} {out[2]:>7} {py * 1e3:>10.3f} {tail}")
    sub = rational_frames(5)
    small = (len(sub) - 3, [f for f in sub.frames if max(f) < len(sub) - 3], [e for e in sub.edges if max(e) < len(sub) - 3])
    py, _, n = best_of(_pykernels.count_solutions, small, args.repeat)
    line = f"{'count rational-5*':<20} {small[0]:>5} {n:>7} {py * 1e3:>10.3f}"
    if _ckernels is not None:
        cy, _, cn = best_of(_ckernels.count_solutions, small, args.repeat)
        assert cn == n
        line += f" {cy * 1e3:>10.3f} {py / cy:>7.1f}x"
    print(line)
    print("* first 24 points; the nodes column shows the number of colorings")


if __name__ == "__main__":
    main()
