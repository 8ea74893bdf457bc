# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration of products of 2x2 unitaries.

Words are visited by length, then lexicographically, with an odometer over the
letters; prefix products are kept on a stack so each word costs one 2x2
product amortized. Must agree with ``discowalk.kernels.word_search_py``.
"""

from libc.math cimport sqrt, hypot, INFINITY


cdef inline void _mul(double* a, double* b, double* out) noexcept nogil:
    # out = a @ b, row-major 2x2 complex as (re, im) pairs
    cdef int r, c
    cdef double re, im
    for r in range(2):
        for c in range(2):
            re = (a[4*r] * b[2*c] - a[4*r+1] * b[2*c+1]
                  + a[4*r+2] * b[4+2*c] - a[4*r+3] * b[4+2*c+1])
            im = (a[4*r] * b[2*c+1] + a[4*r+1] * b[2*c]
                  + a[4*r+2] * b[4+2*c+1] + a[4*r+3] * b[4+2*c])
            out[4*r+2*c] = re
            out[4*r+2*c+1] = im


cdef inline double _dist(double* m, double* t) noexcept nogil:
    # || c m - t ||_F / 2 with c = z/|z|, z = tr(m^dagger t)
    cdef double zr = 0.0, zi = 0.0, az, cr, ci, acc = 0.0, dr, di
    cdef int k
    for k in range(4):
        zr += m[2*k] * t[2*k] + m[2*k+1] * t[2*k+1]
        zi += m[2*k] * t[2*k+1] - m[2*k+1] * t[2*k]
    az = hypot(zr, zi)
    if az > 0:
        cr = zr / az
        ci = zi / az
    else:
        cr = 1.0
        ci = 0.0
    for k in range(4):
        dr = cr * m[2*k] - ci * m[2*k+1] - t[2*k]
        di = cr * m[2*k+1] + ci * m[2*k] - t[2*k+1]
        acc += dr * dr + di * di
    return sqrt(acc) / 2.0


def word_search(double[:, ::1] gens, double[::1] target, int max_depth, double eps):
    """Search words over ``gens`` (rows: flattened 2x2 as 8 doubles).

    Returns ``(letters, distance)`` for the first word (by length, then
    lexicographic) that beat every earlier word by more than ``eps``.
    """
    cdef int k = gens.shape[0]
    cdef int L, pos, i
    cdef double d
    cdef double best = INFINITY
    cdef double[:, ::1] stack
    cdef int[::1] digits
    cdef list best_word = []
    cdef double ident[8]
    ident[:] = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]

    d = _dist(ident, &target[0])
    if d < best - eps:
        best = d
        best_word = []

    import numpy as np
    stack = np.zeros((max_depth + 1, 8))
    digits = np.zeros(max_depth + 1, dtype=np.intc)
    for i in range(8):
        stack[0, i] = ident[i]

    for L in range(1, max_depth + 1):
        for i in range(L):
            digits[i] = 0
        pos = 0
        while True:
            # rebuild prefix products from the first changed position
            for i in range(pos, L):
                _mul(&stack[i, 0], &gens[digits[i], 0], &stack[i + 1, 0])
            d = _dist(&stack[L, 0], &target[0])
            if d < best - eps:
                best = d
                best_word = [digits[i] for i in range(L)]
            # odometer increment, last position fastest
            pos = L - 1
            while pos >= 0 and digits[pos] == k - 1:
                digits[pos] = 0
                pos -= 1
            if pos < 0:
                break
            digits[pos] += 1
    return best_word, best
