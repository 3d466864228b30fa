"""Kernel selection: the compiled extension when built, numpy otherwise.

Set ``TPNCLASS_PURE_PYTHON=1`` to force the fallback.
"""
import os

BACKEND = "python"
if os.environ.get("TPNCLASS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._ckernels import INF, close, close_edge  # noqa: F401
        BACKEND = "cython"
    except ImportError:  # extension not built
        pass
if BACKEND == "python":
    from ._pykernels import INF, close, close_edge  # noqa: F401

LE_ZERO = 1
