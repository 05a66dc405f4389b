"""Kernel backend selection.

Prefers the compiled Cython extension and falls back to the pure-numpy
implementation when the extension is unavailable.  Set the environment
variable ``SAO_LAB_PURE_PYTHON=1`` before import to force the fallback
(useful for the backend benchmark and for debugging).
"""

import os

if os.environ.get("SAO_LAB_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND_NAME

sturm_count = _impl.sturm_count
eig_by_index = _impl.eig_by_index
free_bridge_batch = _impl.free_bridge_batch
reflected_bridge_batch = _impl.reflected_bridge_batch
occupation_histogram = _impl.occupation_histogram
occupation_histogram_batch = _impl.occupation_histogram_batch
boundary_time_batch = _impl.boundary_time_batch
path_integral_batch = _impl.path_integral_batch
