"""Kernel selection: the Cython build when importable, else pure Python.

Set ``ABMOD_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("ABMOD_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import cauchy_product, nullspace, rref, series_reciprocal
else:
    try:
        from ._ckernels import cauchy_product, nullspace, rref, series_reciprocal

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import cauchy_product, nullspace, rref, series_reciprocal

__all__ = ["BACKEND", "cauchy_product", "nullspace", "rref", "series_reciprocal"]
