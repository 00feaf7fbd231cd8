# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as the numpy versions in _kernels_py."""
import numpy as np
from libc.stdint cimport int64_t


cdef inline int64_t _mod(int64_t x, int64_t P) noexcept nogil:
    x %= P
    return x + P if x < 0 else x


cdef void _ring_mul_one(const int64_t[::1] a, const int64_t[::1] b, const int64_t[::1] mod,
                        int64_t[::1] out, int64_t[::1] work, int r, int64_t P) noexcept nogil:
    cdef int i, k, d
    cdef int64_t c
    for i in range(2 * r - 1):
        work[i] = 0
    for i in range(r):
        if a[i] == 0:
            continue
        for k in range(r):
            work[i + k] = (work[i + k] + (a[i] * b[k]) % P) % P
    for d in range(2 * r - 2, r - 1, -1):
        c = work[d]
        if c == 0:
            continue
        for i in range(r):
            work[d - r + i] = _mod(work[d - r + i] - (c * mod[i]) % P, P)
    for i in range(r):
        out[i] = work[i]


def ring_mul(a, b, modulus, int64_t P):
    shape = a.shape
    r = shape[len(shape) - 1]
    cdef const int64_t[:, ::1] A = np.ascontiguousarray(a, dtype=np.int64).reshape(-1, r)
    cdef const int64_t[:, ::1] B = np.ascontiguousarray(np.broadcast_to(b, shape), dtype=np.int64).reshape(-1, r)
    cdef const int64_t[::1] MOD = np.ascontiguousarray(modulus, dtype=np.int64)
    cdef Py_ssize_t n = A.shape[0]
    out = np.zeros((n, r), dtype=np.int64)
    cdef int64_t[:, ::1] OUT = out
    cdef int64_t[::1] WORK = np.zeros(2 * r, dtype=np.int64)
    cdef Py_ssize_t row
    cdef int rr = r
    with nogil:
        for row in range(n):
            _ring_mul_one(A[row], B[row], MOD, OUT[row], WORK, rr, P)
    return out.reshape(shape)


def series_mul(a, b, modulus, int64_t P):
    cdef const int64_t[:, ::1] A = np.ascontiguousarray(a, dtype=np.int64)
    cdef const int64_t[:, ::1] B = np.ascontiguousarray(b, dtype=np.int64)
    cdef const int64_t[::1] MOD = np.ascontiguousarray(modulus, dtype=np.int64)
    cdef int M = A.shape[0]
    cdef int r = A.shape[1]
    out = np.zeros((M, r), dtype=np.int64)
    cdef int64_t[:, ::1] OUT = out
    cdef int64_t[::1] TMP = np.zeros(r, dtype=np.int64)
    cdef int64_t[::1] WORK = np.zeros(2 * r, dtype=np.int64)
    cdef int i, j, t
    cdef bint nonzero
    with nogil:
        for i in range(M):
            nonzero = False
            for t in range(r):
                if A[i, t] != 0:
                    nonzero = True
            if not nonzero:
                continue
            for j in range(M - i):
                _ring_mul_one(A[i], B[j], MOD, TMP, WORK, r, P)
                for t in range(r):
                    OUT[i + j, t] = (OUT[i + j, t] + TMP[t]) % P
    return out


def exponent_counts(theta_exp, trace_exp, int64_t theta_weight, int64_t trace_weight, int64_t L):
    cdef const int64_t[::1] TH = np.ascontiguousarray(theta_exp, dtype=np.int64).ravel()
    cdef const int64_t[::1] TR = np.ascontiguousarray(trace_exp, dtype=np.int64).ravel()
    out = np.zeros(L, dtype=np.int64)
    cdef int64_t[::1] OUT = out
    cdef Py_ssize_t k, n = TH.shape[0]
    cdef int64_t idx
    cdef int64_t tw = _mod(theta_weight, L)
    cdef int64_t rw = _mod(trace_weight, L)
    with nogil:
        for k in range(n):
            idx = (_mod(TH[k], L) * tw + _mod(TR[k], L) * rw) % L
            OUT[idx] += 1
    return out
