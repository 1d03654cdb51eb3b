"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise the NumPy
fallback is loaded. Set ``PVDCOV_PURE_PYTHON=1`` to force the fallback.
"""

import logging
import os

logger = logging.getLogger(__name__)

if os.environ.get("PVDCOV_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as _impl

        BACKEND = "python"
        logger.debug("compiled kernels unavailable, using NumPy fallback")

theta_kernel = _impl.theta_kernel
row_energy_kernel = _impl.row_energy_kernel
threshold_kernel = _impl.threshold_kernel

__all__ = ["BACKEND", "theta_kernel", "row_energy_kernel", "threshold_kernel"]
