# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Dense Gaussian elimination mod p (compiled core).

Row updates are accumulated without reduction and reduced lazily, either
when a row becomes the pivot row or before the running sums could overflow
64 bits.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t

cnp.import_array()


cdef uint64_t _inv(uint64_t a, uint64_t p):
    cdef long long t = 0, newt = 1, r = p, newr = a, quo, tmp
    while newr != 0:
        quo = r // newr
        tmp = t - quo * newt
        t = newt
        newt = tmp
        tmp = r - quo * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return <uint64_t>t


def rank_mod_p(M, long p):
    """Rank of the integer matrix M over F_p.  M is not modified."""
    if p < 2 or p >= (1 << 31):
        raise ValueError("modulus out of range")
    cdef cnp.ndarray[uint64_t, ndim=2, mode="c"] A = np.ascontiguousarray(
        np.asarray(M, dtype=np.int64) % p, dtype=np.uint64)
    cdef Py_ssize_t rows = A.shape[0], cols = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef uint64_t P = <uint64_t>p
    cdef uint64_t f, inv, x
    cdef uint64_t *row_r
    cdef uint64_t *row_i
    cdef uint64_t tmp
    # number of unreduced updates an entry can absorb without overflow
    cdef uint64_t budget = (<uint64_t>0xFFFFFFFFFFFFFFFF - P) // ((P - 1) * (P - 1))
    cdef uint64_t pending = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            x = A[i, c] % P
            A[i, c] = x
            if x != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        row_r = &A[r, 0]
        inv = _inv(row_r[c], P)
        for j in range(c, cols):
            row_r[j] = ((row_r[j] % P) * inv) % P
        if pending + 1 > budget:
            for i in range(r + 1, rows):
                row_i = &A[i, 0]
                for j in range(c, cols):
                    row_i[j] = row_i[j] % P
            pending = 0
        for i in range(r + 1, rows):
            row_i = &A[i, 0]
            x = row_i[c] % P
            if x == 0:
                row_i[c] = 0
                continue
            f = P - x
            for j in range(c, cols):
                row_i[j] += f * row_r[j]
        pending += 1
        r += 1
    return r
