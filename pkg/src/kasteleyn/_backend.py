"""Pick the compiled kernels when available, else the numpy fallback.

Set ``KASTELEYN_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

NAME = "python"
power_sums = _pykernels.power_sums
transfer_step = _pykernels.transfer_step

if os.environ.get("KASTELEYN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        NAME = "cython"
        power_sums = _ckernels.power_sums
        transfer_step = _ckernels.transfer_step
