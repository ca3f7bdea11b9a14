"""Kernel selection: the compiled extension when built, else pure Python.

Set ``NILDEGEN_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("NILDEGEN_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
int_rank = _impl.int_rank
adjugate_batch = _impl.adjugate_batch
rebase_modp = _impl.rebase_modp

__all__ = ["BACKEND", "int_rank", "adjugate_batch", "rebase_modp"]
