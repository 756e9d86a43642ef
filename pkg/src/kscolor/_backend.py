"""Pick the compiled search kernels when built, else the pure-Python ones.

Set ``KSCOLOR_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("KSCOLOR_PURE_PYTHON"):
    from . import _pykernels as kernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        from . import _pykernels as kernels

BACKEND = kernels.BACKEND
dfs_solve = kernels.dfs_solve
count_solutions = kernels.count_solutions
