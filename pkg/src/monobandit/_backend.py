"""Kernel backend selection.

The compiled extension is preferred when importable; the NumPy fallback is
semantically and bit-wise equivalent. Set MONOBANDIT_BACKEND=py or
MONOBANDIT_BACKEND=compiled to force a choice (the latter raises if the
extension is missing).
"""

from __future__ import annotations

import os

_requested = os.environ.get("MONOBANDIT_BACKEND", "").strip().lower()
if _requested not in ("", "py", "compiled"):
    raise ImportError(
        f"MONOBANDIT_BACKEND must be 'py' or 'compiled', got {_requested!r}"
    )

if _requested == "py":
    from monobandit import _core_py as _impl

    BACKEND = "python"
else:
    try:
        from monobandit import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from monobandit import _core_py as _impl

        BACKEND = "python"

fill_block = _impl.fill_block
kw_loop = _impl.kw_loop
