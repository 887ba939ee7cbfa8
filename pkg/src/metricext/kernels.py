"""Select the pair-integration backend at import.

The compiled extension is used when it was built; set ``METRICEXT_PURE_PYTHON=1``
to force the pure-Python fallback.
"""
import os

from . import _kernels_py

if os.environ.get("METRICEXT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"
integrate_one = _impl.integrate_one
integrate_all = _impl.integrate_all
