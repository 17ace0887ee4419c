"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``HDIOPH_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("HDIOPH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

carnot_dists = _impl.carnot_dists
gauss_sieve = _impl.gauss_sieve
siegel_scan = _impl.siegel_scan

__all__ = ["BACKEND", "carnot_dists", "gauss_sieve", "siegel_scan"]
