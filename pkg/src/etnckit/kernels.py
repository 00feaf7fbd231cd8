"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``ETNCKIT_PURE_PYTHON=1`` to force the numpy implementations.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_compiled = None
if os.environ.get("ETNCKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
INT64_LIMIT = 2 ** 31


def _use_compiled(P: int, *arrays: np.ndarray) -> bool:
    return _compiled is not None and P < INT64_LIMIT and all(a.dtype != object for a in arrays)


def ring_mul(a, b, modulus, P: int) -> np.ndarray:
    if _use_compiled(P, a, b):
        return _compiled.ring_mul(a, b, modulus, P)
    return _kernels_py.ring_mul(a, np.broadcast_to(b, a.shape), modulus, P)


def series_mul(a, b, modulus, P: int) -> np.ndarray:
    if _use_compiled(P, a, b):
        return _compiled.series_mul(a, b, modulus, P)
    return _kernels_py.series_mul(a, b, modulus, P)


def exponent_counts(theta_exp, trace_exp, theta_weight: int, trace_weight: int, L: int) -> np.ndarray:
    if _compiled is not None and L < INT64_LIMIT:
        return _compiled.exponent_counts(theta_exp, trace_exp, theta_weight, trace_weight, L)
    return _kernels_py.exponent_counts(theta_exp, trace_exp, theta_weight, trace_weight, L)
