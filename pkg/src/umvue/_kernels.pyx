# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels; same contracts as ``_pykernels``."""

from libc.math cimport fabs
from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline int umvue_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int umvue_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int umvue_mul_ovf(long long a, long long b, long long *r) nogil
    int umvue_sub_ovf(long long a, long long b, long long *r) nogil

cdef long long _LIMIT = 1LL << 62


cdef int _bareiss_ll(long long *a, Py_ssize_t m, Py_ssize_t n, Py_ssize_t *piv_out) nogil:
    # Returns pivot count, or -1 on int64 overflow.
    cdef Py_ssize_t r = 0, c, p, i, j, k = 0
    cdef long long prev = 1, piv, f, x, y, t
    for c in range(n):
        if r == m:
            break
        p = r
        while p < m and a[p * n + c] == 0:
            p += 1
        if p == m:
            continue
        if p != r:
            for j in range(n):
                t = a[r * n + j]
                a[r * n + j] = a[p * n + j]
                a[p * n + j] = t
        piv = a[r * n + c]
        for i in range(r + 1, m):
            f = a[i * n + c]
            for j in range(c + 1, n):
                if umvue_mul_ovf(piv, a[i * n + j], &x):
                    return -1
                if umvue_mul_ovf(f, a[r * n + j], &y):
                    return -1
                if umvue_sub_ovf(x, y, &t):
                    return -1
                a[i * n + j] = t // prev
            a[i * n + c] = 0
        prev = piv
        piv_out[k] = c
        k += 1
        r += 1
    return k


cdef list _bareiss_obj(list rows, Py_ssize_t ncols):
    cdef list a = [list(row) for row in rows]
    cdef Py_ssize_t m = len(a), r = 0, c, p, i, j
    cdef list pivots = []
    cdef list row_r, row_i
    cdef object prev = 1, piv, f
    for c in range(ncols):
        if r == m:
            break
        p = r
        while p < m and (<list>a[p])[c] == 0:
            p += 1
        if p == m:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        row_r = <list>a[r]
        piv = row_r[c]
        for i in range(r + 1, m):
            row_i = <list>a[i]
            f = row_i[c]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def int_pivots(rows, ncols):
    """Pivot columns of an integer matrix by fraction-free elimination.

    Runs on int64 with overflow detection and falls back to Python integers
    when an intermediate minor leaves the int64 range.
    """
    cdef list rl = [list(r) for r in rows]
    cdef Py_ssize_t m = len(rl), n = ncols, i, j, k
    cdef long long *a
    cdef Py_ssize_t *piv
    if m == 0 or n == 0:
        return []
    for row in rl:
        for v in row:
            if v >= _LIMIT or v <= -_LIMIT:
                return _bareiss_obj(rl, n)
    a = <long long *> malloc(m * n * sizeof(long long))
    piv = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    if a == NULL or piv == NULL:
        free(a)
        free(piv)
        raise MemoryError()
    try:
        for i in range(m):
            for j in range(n):
                a[i * n + j] = rl[i][j]
        with nogil:
            k = _bareiss_ll(a, m, n, piv)
        if k < 0:
            return _bareiss_obj(rl, n)
        return [piv[i] for i in range(k)]
    finally:
        free(a)
        free(piv)


def float_pivots(rows, ncols, double tol):
    """Pivot columns of a float matrix with partial pivoting and a relative threshold."""
    cdef Py_ssize_t m = len(rows), n = ncols, i, j, r = 0, c, p
    cdef double *a
    cdef double scale = 0.0, thresh, best, f, t, pv
    cdef list pivots = []
    if m == 0 or n == 0:
        return pivots
    a = <double *> malloc(m * n * sizeof(double))
    if a == NULL:
        raise MemoryError()
    try:
        for i, row in enumerate(rows):
            for j in range(n):
                a[i * n + j] = row[j]
                if fabs(a[i * n + j]) > scale:
                    scale = fabs(a[i * n + j])
        if scale == 0.0:
            return pivots
        thresh = tol * scale
        for c in range(n):
            if r == m:
                break
            p = r
            best = fabs(a[r * n + c])
            for i in range(r + 1, m):
                if fabs(a[i * n + c]) > best:
                    best = fabs(a[i * n + c])
                    p = i
            if best <= thresh:
                continue
            if p != r:
                for j in range(n):
                    t = a[r * n + j]
                    a[r * n + j] = a[p * n + j]
                    a[p * n + j] = t
            pv = a[r * n + c]
            for i in range(r + 1, m):
                f = a[i * n + c] / pv
                if f != 0.0:
                    for j in range(c + 1, n):
                        a[i * n + j] -= f * a[r * n + j]
                a[i * n + c] = 0.0
            pivots.append(c)
            r += 1
        return pivots
    finally:
        free(a)


def rational_pivots(rows, ncols):
    """Pivot columns of a matrix of ``Fraction`` entries, via integer row scaling."""
    cdef list int_rows = []
    cdef list num, den
    cdef Py_ssize_t j, n = ncols
    cdef object d, g, a, b
    for r in rows:
        num = [v.numerator for v in r]
        den = [v.denominator for v in r]
        d = 1
        for j in range(n):
            b = den[j]
            if b != 1 and d % b:
                a, g = d, b
                while g:
                    a, g = g, a % g
                d = d // a * b
        int_rows.append([num[j] * (d // den[j]) for j in range(n)])
    return int_pivots(int_rows, ncols)
