"""Backend selection for the elimination kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is used. Set ``UMVUE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("UMVUE_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

int_pivots = _impl.int_pivots
float_pivots = _impl.float_pivots
rational_pivots = _impl.rational_pivots

__all__ = ["BACKEND", "int_pivots", "float_pivots", "rational_pivots"]
