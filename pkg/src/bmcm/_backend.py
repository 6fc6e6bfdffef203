"""Select the bidding kernel at import time.

The compiled extension is preferred when present; set ``BMCM_PURE_PYTHON=1``
to force the pure-Python kernel (useful for debugging and benchmarking).
`BACKEND` names the active choice.
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("BMCM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _core_py
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _core_py
        BACKEND = "python"

solve_fifo = _impl.solve_fifo

PERFECT = _core_py.PERFECT
LEVEL_CAP = _core_py.LEVEL_CAP
NO_FREE = _core_py.NO_FREE
