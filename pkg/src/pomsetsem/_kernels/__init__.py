"""Valuation-enumeration kernels for Boolean formulae.

A formula is compiled to a postfix program (see :mod:`pomsetsem.formula`) and
evaluated over every valuation of its ``nvars`` variables.  Valuation ``i``
assigns variable ``j`` the value of bit ``j`` of ``i``.

Two interchangeable backends exist: ``_ckernel`` (Cython, evaluates 64
valuations per machine word) and ``_pykernel`` (bit-parallel Python ints).
The compiled one is used when importable; set ``POMSETSEM_PURE_PYTHON=1``
to force the fallback.
"""

import os

from . import _pykernel

BACKEND = "python"
is_sat = _pykernel.is_sat
truth_table = _pykernel.truth_table

if not os.environ.get("POMSETSEM_PURE_PYTHON"):
    try:
        from . import _ckernel
    except ImportError:  # extension not built
        _ckernel = None
    if _ckernel is not None:
        BACKEND = "cython"
        is_sat = _ckernel.is_sat
        truth_table = _ckernel.truth_table

__all__ = ["BACKEND", "is_sat", "truth_table"]
