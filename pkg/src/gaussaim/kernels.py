"""Kernel selection: compiled extension when importable, else pure Python.

Set ``GAUSSAIM_PURE=1`` to force the fallback.  ``BACKEND`` names the active
implementation (``"compiled"`` or ``"python"``).
"""

import os

from . import _pykernels as python_kernels

try:
    if os.environ.get("GAUSSAIM_PURE", "") not in ("", "0"):
        raise ImportError("pure-Python kernels requested")
    from . import _cext as compiled_kernels
except ImportError:
    compiled_kernels = None

_active = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = "compiled" if compiled_kernels is not None else "python"

aim_values = _active.aim_values
numerov_outward = _active.numerov_outward
numerov_inward = _active.numerov_inward
