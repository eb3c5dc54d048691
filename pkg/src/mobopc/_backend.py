"""Kernel backend selection.

The compiled extension is used when it imports; setting the environment
variable ``MOBOPC_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _fallback

if os.environ.get("MOBOPC_PURE_PYTHON", "") not in ("", "0"):
    kernels = _fallback
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _fallback

COMPILED = kernels is not _fallback
BACKEND = "compiled" if COMPILED else "python"
