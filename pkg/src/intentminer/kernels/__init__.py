"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is fixed at import time: numba when it is installed and
``INTENTMINER_NUMBA`` is not set to ``0``, numpy otherwise.  Both backends
are importable directly for comparison and benchmarking.
"""
from __future__ import annotations

from .._accel import USE_NUMBA
from . import _numpy as numpy_backend

if USE_NUMBA:
    from . import _numba as numba_backend

    _active = numba_backend
    BACKEND = "numba"
else:
    numba_backend = None
    _active = numpy_backend
    BACKEND = "numpy"

rbf_gram = _active.rbf_gram
smo_solve = _active.smo_solve
best_split = _active.best_split
sgd_epoch = _active.sgd_epoch
mlp_forward = _active.mlp_forward

__all__ = [
    "BACKEND",
    "best_split",
    "mlp_forward",
    "numba_backend",
    "numpy_backend",
    "rbf_gram",
    "sgd_epoch",
    "smo_solve",
]
