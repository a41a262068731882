"""Kernel backend selection.

The compiled Cython extension is preferred when importable; set
FLAGSPHERE_KERNELS=python (or =c) to force a backend.  Both expose the same
functions; `backend()` reports which one is live.
"""

import os

from . import pykernels as _py

_requested = os.environ.get("FLAGSPHERE_KERNELS", "").lower()

_impl = None
if _requested in ("", "c", "cython"):
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested in ("c", "cython"):
            raise ImportError(
                "FLAGSPHERE_KERNELS requested the compiled kernels, but the "
                "extension is not built; run `pip install -e . --no-build-isolation`"
            )
        _impl = None
if _impl is None:
    _impl = _py

FOUND = _py.FOUND
EXHAUSTED = _py.EXHAUSTED
BUDGET = _py.BUDGET
MODE_FIRST = _py.MODE_FIRST
MODE_NONZERO = _py.MODE_NONZERO
MODE_UNIT = _py.MODE_UNIT
MODE_PLUS1 = _py.MODE_PLUS1
MODE_MINUS1 = _py.MODE_MINUS1

match_maps = _impl.match_maps
nonsquare_edges = _impl.nonsquare_edges


def backend() -> str:
    return _impl.BACKEND


def implementations():
    """All importable kernel implementations, for parity tests and the
    benchmark."""
    impls = {"python": _py}
    try:
        from . import _ckernels

        impls["c"] = _ckernels
    except ImportError:
        pass
    return impls
