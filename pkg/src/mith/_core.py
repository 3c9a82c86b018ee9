"""Kernel backend selection.

The compiled Cython kernels handle moduli below 62 bits (the hot
desk-scale fields); larger moduli always use the pure-Python kernels.
Set MITH_PURE_PYTHON=1 to force the pure backend everywhere.
"""

import os

from mith import _purecore

if os.environ.get("MITH_PURE_PYTHON"):
    _fast = None
else:
    try:
        from mith import _fastcore as _fast
    except ImportError:
        _fast = None

HAVE_FAST = _fast is not None


def ops_for(p: int):
    """Kernel module to use for modulus p."""
    if _fast is not None and p.bit_length() <= _fast.MAX_MODULUS_BITS:
        return _fast
    return _purecore


def backends():
    """All importable backends, for parity tests and benchmarks."""
    return [_purecore] if _fast is None else [_purecore, _fast]
