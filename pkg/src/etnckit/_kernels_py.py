"""Pure-Python/numpy reference implementations of the hot kernels.

Arrays hold residues modulo ``P``.  Every function accepts int64 arrays
(requires ``P < 2**31`` so products fit) or object arrays of Python ints.
"""
from __future__ import annotations

import numpy as np


def ring_mul(a: np.ndarray, b: np.ndarray, modulus: np.ndarray, P: int) -> np.ndarray:
    """Elementwise product in (Z/P)[x]/(modulus) of arrays shaped (..., r)."""
    r = a.shape[-1]
    prod = np.zeros(a.shape[:-1] + (2 * r - 1,), dtype=a.dtype)
    for i in range(r):
        for k in range(r):
            prod[..., i + k] = (prod[..., i + k] + (a[..., i] * b[..., k]) % P) % P
    for d in range(2 * r - 2, r - 1, -1):
        c = prod[..., d]
        for i in range(r):
            if modulus[i]:
                prod[..., d - r + i] = (prod[..., d - r + i] - (c * int(modulus[i])) % P) % P
    return prod[..., :r] % P


def series_mul(a: np.ndarray, b: np.ndarray, modulus: np.ndarray, P: int) -> np.ndarray:
    """Truncated product of two series with coefficients shaped (M, r)."""
    M = a.shape[0]
    out = np.zeros_like(a)
    for i in range(M):
        if not np.any(a[i]):
            continue
        rows = M - i
        term = ring_mul(np.broadcast_to(a[i], (rows, a.shape[1])), b[:rows], modulus, P)
        out[i:] = (out[i:] + term) % P
    return out


def exponent_counts(theta_exp: np.ndarray, trace_exp: np.ndarray,
                    theta_weight: int, trace_weight: int, L: int) -> np.ndarray:
    """Histogram of (theta_weight*theta_exp + trace_weight*trace_exp) mod L."""
    idx = (theta_exp.astype(np.int64) * theta_weight + trace_exp.astype(np.int64) * trace_weight) % L
    return np.bincount(idx, minlength=L).astype(np.int64)
