# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer elimination kernel.

Same contract as ``quaddef._kernels_py``. Arithmetic is exact in 64-bit
integers with explicit overflow detection; any overflow raises
``OverflowError`` and the caller reruns the pure-Python kernel.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from libc.stdint cimport int64_t, int32_t, INT64_MIN

BACKEND = "cython"

cdef extern from *:
    """
    static inline int qd_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int qd_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int qd_mul(long long a, long long b, long long *r) nogil
    int qd_sub(long long a, long long b, long long *r) nogil


ctypedef struct Row:
    Py_ssize_t n
    int32_t *cols
    long long *vals


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef int _normalize(Py_ssize_t n, long long *vals) nogil:
    cdef long long g = 0
    cdef Py_ssize_t k
    for k in range(n):
        if vals[k] == INT64_MIN:
            return -1
        g = _gcd(g, vals[k])
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    if g != 1:
        for k in range(n):
            vals[k] = vals[k] // g
    return 0


cdef Py_ssize_t _combine(Row *p, Py_ssize_t nr, int32_t *rc, long long *rv,
                         int32_t *oc, long long *ov) nogil:
    # returns output length, or -1 on overflow
    cdef long long a = p.vals[0]
    cdef long long b = rv[0]
    if a == INT64_MIN or b == INT64_MIN:
        return -1
    cdef long long g = _gcd(a, b)
    a = a // g
    b = b // g
    cdef Py_ssize_t i = 1, j = 1, m = 0
    cdef Py_ssize_t np_ = p.n
    cdef long long x, y, v
    while i < np_ and j < nr:
        if p.cols[i] < rc[j]:
            if qd_mul(-b, p.vals[i], &x):
                return -1
            oc[m] = p.cols[i]
            ov[m] = x
            m += 1
            i += 1
        elif rc[j] < p.cols[i]:
            if qd_mul(a, rv[j], &x):
                return -1
            oc[m] = rc[j]
            ov[m] = x
            m += 1
            j += 1
        else:
            if qd_mul(a, rv[j], &x):
                return -1
            if qd_mul(b, p.vals[i], &y):
                return -1
            if qd_sub(x, y, &v):
                return -1
            if v != 0:
                oc[m] = rc[j]
                ov[m] = v
                m += 1
            i += 1
            j += 1
    while i < np_:
        if qd_mul(-b, p.vals[i], &x):
            return -1
        oc[m] = p.cols[i]
        ov[m] = x
        m += 1
        i += 1
    while j < nr:
        if qd_mul(a, rv[j], &x):
            return -1
        oc[m] = rc[j]
        ov[m] = x
        m += 1
        j += 1
    return m


cdef list _eliminate(list rows, Py_ssize_t ncols):
    cdef Row *piv = <Row *> malloc(max(ncols, 1) * sizeof(Row))
    cdef int32_t *ac = <int32_t *> malloc(max(ncols, 1) * sizeof(int32_t))
    cdef long long *av = <long long *> malloc(max(ncols, 1) * sizeof(long long))
    cdef int32_t *bc = <int32_t *> malloc(max(ncols, 1) * sizeof(int32_t))
    cdef long long *bv = <long long *> malloc(max(ncols, 1) * sizeof(long long))
    cdef int32_t *tc
    cdef long long *tv
    cdef Py_ssize_t k, m, idx, lead
    cdef bint overflow = False
    cdef list chosen = []
    cdef Row *p
    if piv is NULL or ac is NULL or av is NULL or bc is NULL or bv is NULL:
        free(piv); free(ac); free(av); free(bc); free(bv)
        raise MemoryError()
    for k in range(ncols):
        piv[k].n = 0
    try:
        for idx in range(len(rows)):
            cols, vals = rows[idx]
            m = len(cols)
            if m == 0:
                continue
            for k in range(m):
                ac[k] = cols[k]
                av[k] = vals[k]
            while m > 0:
                lead = ac[0]
                p = &piv[lead]
                if p.n == 0:
                    if _normalize(m, av) < 0:
                        overflow = True
                        break
                    p.cols = <int32_t *> malloc(m * sizeof(int32_t))
                    p.vals = <long long *> malloc(m * sizeof(long long))
                    if p.cols is NULL or p.vals is NULL:
                        raise MemoryError()
                    memcpy(p.cols, ac, m * sizeof(int32_t))
                    memcpy(p.vals, av, m * sizeof(long long))
                    p.n = m
                    chosen.append(idx)
                    break
                m = _combine(p, m, ac, av, bc, bv)
                if m < 0:
                    overflow = True
                    break
                tc = ac; ac = bc; bc = tc
                tv = av; av = bv; bv = tv
            if overflow:
                break
    finally:
        for k in range(ncols):
            if piv[k].n:
                free(piv[k].cols)
                free(piv[k].vals)
        free(piv); free(ac); free(av); free(bc); free(bv)
    if overflow:
        raise OverflowError("64-bit overflow during elimination")
    return chosen


def echelon_rank(rows, Py_ssize_t ncols):
    """Rank of an integer matrix given as sparse rows."""
    return len(_eliminate(rows, ncols))


def echelon_pivots(rows, Py_ssize_t ncols):
    """Indices of the input rows that became pivots."""
    return _eliminate(rows, ncols)
