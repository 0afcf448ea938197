"""Select the compiled kernels when available, else the pure-Python ones.

Set ``TORUSFILL_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("TORUSFILL_PURE", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

displacement = _impl.displacement
enclose_max = _impl.enclose_max

__all__ = ["BACKEND", "displacement", "enclose_max"]
