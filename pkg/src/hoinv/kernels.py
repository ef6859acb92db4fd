"""Backend selection for the exact integer kernels.

The compiled extension is used when it imports; set ``HOINV_PURE_PYTHON=1``
to force the Python fallback. Both backends compute identical results, and
an int64 overflow in the extension silently retries in Python integers.
"""
import os

from hoinv import _rref_py

_ext = None
if not os.environ.get("HOINV_PURE_PYTHON"):
    try:
        from hoinv import _rref_ext as _ext
    except ImportError:  # extension not built
        _ext = None

BACKEND = "cython" if _ext is not None else "python"


def rref_int(rows, ncols):
    if _ext is not None:
        try:
            return _ext.rref_int(rows, ncols)
        except OverflowError:
            pass
    return _rref_py.rref_int(rows, ncols)


def matmul_int(x, y, ncols):
    if _ext is not None:
        try:
            return _ext.matmul_int(x, y, ncols)
        except OverflowError:
            pass
    return _rref_py.matmul_int(x, y, ncols)


rref_int.__doc__ = _rref_py.rref_int.__doc__
matmul_int.__doc__ = _rref_py.matmul_int.__doc__
