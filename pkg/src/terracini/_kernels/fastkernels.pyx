# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels.

Same contract as ``pykernels``: fraction-free Bareiss echelon over Python
integers (arbitrary precision, so entries stay Python objects; the win is
C-level loop and index handling) and Gaussian elimination modulo a
word-sized prime on a flat C array (the big win: no object arithmetic at
all in the inner loop).
"""

from libc.stdlib cimport free, malloc


def bareiss_echelon(rows):
    """Fraction-free row echelon form; see pykernels.bareiss_echelon."""
    cdef Py_ssize_t nr = len(rows)
    cdef Py_ssize_t nc = len(rows[0]) if nr else 0
    m = [list(r) for r in rows]
    cdef Py_ssize_t pr = 0, pc, i, j, sel
    cdef int sign = 1
    pivots = []
    prev = 1
    for pc in range(nc):
        if pr >= nr:
            break
        sel = -1
        for i in range(pr, nr):
            if m[i][pc] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != pr:
            m[pr], m[sel] = m[sel], m[pr]
            sign = -sign
        piv = m[pr][pc]
        mp = m[pr]
        for i in range(pr + 1, nr):
            mi = m[i]
            t = mi[pc]
            for j in range(pc + 1, nc):
                mi[j] = (piv * mi[j] - t * mp[j]) // prev
            mi[pc] = 0
        pivots.append(pc)
        prev = piv
        pr += 1
    return m, pivots, sign


cdef long long _modinv(long long a, long long p):
    # extended Euclid; a in [1, p), p prime
    cdef long long old_r = a, r = p
    cdef long long old_s = 1, s = 0
    cdef long long q, tmp
    while r != 0:
        q = old_r / r
        tmp = old_r - q * r
        old_r = r
        r = tmp
        tmp = old_s - q * s
        old_s = s
        s = tmp
    if old_s < 0:
        old_s += p
    return old_s


def mod_rank(rows, long long p):
    """Rank of an integer matrix reduced modulo the prime ``p``."""
    cdef Py_ssize_t nr = len(rows)
    cdef Py_ssize_t nc = len(rows[0]) if nr else 0
    if nr == 0 or nc == 0:
        return 0
    cdef long long *a = <long long *> malloc(nr * nc * sizeof(long long))
    if a == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, pc, sel, rank
    cdef long long t, f, inv
    try:
        for i in range(nr):
            ri = rows[i]
            for j in range(nc):
                a[i * nc + j] = ri[j] % p  # Python %, so already in [0, p)
        rank = 0
        for pc in range(nc):
            if rank >= nr:
                break
            sel = -1
            for i in range(rank, nr):
                if a[i * nc + pc] != 0:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != rank:
                for j in range(nc):
                    t = a[rank * nc + j]
                    a[rank * nc + j] = a[sel * nc + j]
                    a[sel * nc + j] = t
            inv = _modinv(a[rank * nc + pc], p)
            for i in range(rank + 1, nr):
                t = a[i * nc + pc]
                if t != 0:
                    f = (t * inv) % p
                    for j in range(pc, nc):
                        a[i * nc + j] = (a[i * nc + j] - f * a[rank * nc + j]) % p
                        if a[i * nc + j] < 0:
                            a[i * nc + j] += p
            rank += 1
        return rank
    finally:
        free(a)
