"""The compiled and pure-Python kernels must agree exactly."""

import os

import pytest

from kscolor import _backend, _pykernels
from kscolor.rational import perturb_frames, rational_frames
from kscolor.solver import variable_order

from oracles import random_direction_sets

try:
    from kscolor import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _instances(peres33, ck31, bub33):
    yield peres33
    yield ck31
    yield bub33
    yield rational_frames(13)
    yield perturb_frames(peres33, 0.02, seed=0).result
    yield from random_direction_sets(30, max_points=20, seed=12)


@needs_ext
def test_backends_identical(peres33, ck31, bub33):
    for ds in _instances(peres33, ck31, bub33):
        args = (len(ds), ds.frames, ds.edges, variable_order(ds))
        assert _ckernels.dfs_solve(*args) == _pykernels.dfs_solve(*args)


@needs_ext
def test_count_backends_identical():
    for ds in random_direction_sets(30, max_points=18, seed=13):
        args = (len(ds), ds.frames, ds.edges)
        assert _ckernels.count_solutions(*args) == _pykernels.count_solutions(*args)


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")
    if _ckernels is not None and not os.environ.get("KSCOLOR_PURE_PYTHON"):
        assert _backend.BACKEND == "cython"


def test_benchmark_runs(capsys):
    import runpy
    from pathlib import Path

    bench = Path(__file__).parents[1] / "benchmarks" / "bench_solver.py"
    runpy.run_path(str(bench), run_name="bench")["main"](["--repeat", "1"])
    out = capsys.readouterr().out
    assert "rational-25" in out and "peres33 perturbed" in out
