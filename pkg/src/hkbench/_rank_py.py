"""Dense Gaussian elimination mod p in numpy (fallback for the compiled core)."""

import numpy as np


def rank_mod_p(M, p: int) -> int:
    """Rank of the integer matrix M over F_p.  M is not modified."""
    if p < 2 or p >= 1 << 31:
        raise ValueError("modulus out of range")
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv], c:] = A[[piv, r], c:]
        A[r, c:] = A[r, c:] * pow(int(A[r, c]), -1, p) % p
        below = r + 1 + np.flatnonzero(A[r + 1 :, c])
        if below.size:
            A[below, c:] = (A[below, c:] - np.outer(A[below, c], A[r, c:])) % p
        r += 1
    return r
