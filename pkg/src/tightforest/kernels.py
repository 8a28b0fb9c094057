"""Kernel backend selection.

The compiled lane (`_kernel_c`, Cython) is used when importable, else the
pure-Python mirror. TLF_KERNEL=py or TLF_KERNEL=c forces a lane; forcing
the compiled lane when it is not built is an import error.
"""

from __future__ import annotations

import os

_forced = os.environ.get("TLF_KERNEL")

if _forced == "py":
    from . import _kernel_py as impl
elif _forced == "c":
    from . import _kernel_c as impl  # type: ignore[attr-defined]
elif _forced:
    raise ImportError(f"TLF_KERNEL must be 'py' or 'c', got {_forced!r}")
else:
    try:
        from . import _kernel_c as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as impl

BACKEND = impl.BACKEND
TARGET_FOREST = impl.TARGET_FOREST
TARGET_MATCHING = impl.TARGET_MATCHING

nu_search = impl.nu_search
nu_at_least = impl.nu_at_least
path_search = impl.path_search
forest_search = impl.forest_search
forest_at_least = impl.forest_at_least
turan_phase1 = impl.turan_phase1
turan_phase2 = impl.turan_phase2
