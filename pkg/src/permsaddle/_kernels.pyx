# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for permutation statistics.

Mirrors ``permsaddle._fallback`` exactly (same generator, same visiting
order, same left-to-right accumulation).
"""

import numpy as np

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

NAME = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX_1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX_2 = 0x94D049BB133111EBULL
cdef uint64_t RETRY = 0xD1B54A32D192ED03ULL
cdef uint64_t MASK32 = 0xFFFFFFFFULL


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * MIX_1
    z = (z ^ (z >> 27)) * MIX_2
    return z ^ (z >> 31)


cdef inline uint64_t _word(uint64_t key, uint64_t counter) noexcept nogil:
    return _mix(key + (counter + 1) * GOLDEN)


cdef inline uint64_t _bounded(uint64_t key, uint64_t counter, uint64_t bound) noexcept nogil:
    cdef uint64_t m = (_word(key, counter) >> 32) * bound
    cdef uint64_t low = m & MASK32
    cdef uint64_t threshold
    cdef uint64_t attempt = 1
    if low < bound:
        threshold = ((<uint64_t>1) << 32) % bound
        while low < threshold:
            m = (_word(_mix(key ^ (attempt * RETRY)), counter) >> 32) * bound
            low = m & MASK32
            attempt += 1
    return m >> 32


def mc_statistics(a, b, key, long long start, long long count):
    """Statistics for Monte Carlo replicates ``start .. start+count-1``."""
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0]
    out_arr = np.empty(count, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef uint64_t ukey = <uint64_t>(int(key) & 0xFFFFFFFFFFFFFFFF)
    cdef int64_t *perm = <int64_t *>malloc(n * sizeof(int64_t))
    if perm == NULL:
        raise MemoryError()
    cdef long long m
    cdef Py_ssize_t i, k
    cdef uint64_t base, j
    cdef int64_t held
    cdef double acc
    try:
        with nogil:
            for m in range(count):
                for k in range(n):
                    perm[k] = k
                base = <uint64_t>(start + m) * <uint64_t>(n - 1)
                for i in range(n - 1, 0, -1):
                    j = _bounded(ukey, base + <uint64_t>(n - 1 - i), <uint64_t>(i + 1))
                    held = perm[i]
                    perm[i] = perm[j]
                    perm[j] = held
                acc = 0.0
                for k in range(n):
                    acc = acc + av[k] * bv[perm[k]]
                out[m] = acc
    finally:
        free(perm)
    return out_arr


def all_statistics(a, b):
    """Statistic for every permutation of ``range(n)``, in lexicographic order."""
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0]
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t k
    for k in range(2, n + 1):
        total *= k
    out_arr = np.empty(total, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t *perm = <Py_ssize_t *>malloc(n * sizeof(Py_ssize_t))
    if perm == NULL:
        raise MemoryError()
    cdef Py_ssize_t idx, i, j, lo, hi
    cdef Py_ssize_t held
    cdef double acc
    try:
        with nogil:
            for k in range(n):
                perm[k] = k
            for idx in range(total):
                acc = 0.0
                for k in range(n):
                    acc = acc + av[k] * bv[perm[k]]
                out[idx] = acc
                # next lexicographic permutation
                i = n - 2
                while i >= 0 and perm[i] > perm[i + 1]:
                    i -= 1
                if i < 0:
                    break
                j = n - 1
                while perm[j] < perm[i]:
                    j -= 1
                held = perm[i]
                perm[i] = perm[j]
                perm[j] = held
                lo = i + 1
                hi = n - 1
                while lo < hi:
                    held = perm[lo]
                    perm[lo] = perm[hi]
                    perm[hi] = held
                    lo += 1
                    hi -= 1
    finally:
        free(perm)
    return out_arr
