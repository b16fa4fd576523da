"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  ``BOOKRAMSEY_BACKEND=python``
forces the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

_forced = os.environ.get("BOOKRAMSEY_BACKEND", "").strip().lower()

compiled = None
if _forced != "python":
    try:
        from . import _ckernels as compiled
    except ImportError:  # extension not built
        compiled = None
        if _forced == "cython":
            raise

kernels = compiled if compiled is not None else _pykernels
BACKEND: str = kernels.BACKEND


def available() -> dict:
    """Map backend name -> kernel module for every importable backend."""
    out = {"python": _pykernels}
    if compiled is not None:
        out["cython"] = compiled
    return out
