# cython: boundscheck=False, wraparound=False, cdivision=True
"""int64 Gauss-Jordan elimination with overflow detection.

Mirrors :mod:`hoinv._rref_py`. Any intermediate value that leaves the int64
range raises ``OverflowError`` so the caller can retry with Python integers.
"""
from libc.stdint cimport int64_t, INT64_MIN
from libc.stdlib cimport malloc, free

cdef extern from *:
    bint mul_ovf "__builtin_mul_overflow"(int64_t a, int64_t b, int64_t* r) nogil
    bint sub_ovf "__builtin_sub_overflow"(int64_t a, int64_t b, int64_t* r) nogil
    bint add_ovf "__builtin_add_overflow"(int64_t a, int64_t b, int64_t* r) nogil

cdef int64_t LIMIT = (<int64_t>1) << 62


cdef inline int64_t _gcd(int64_t a, int64_t b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int64_t* _load(rows, Py_ssize_t m, Py_ssize_t n) except NULL:
    cdef int64_t* a = <int64_t*> malloc((m * n + 1) * sizeof(int64_t))
    cdef Py_ssize_t i, j
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(m):
            row = rows[i]
            if len(row) != n:
                raise ValueError("ragged matrix")
            for j in range(n):
                v = row[j]
                if v >= LIMIT or v <= -LIMIT:
                    raise OverflowError("entry exceeds int64 fast path")
                a[i * n + j] = v
    except BaseException:
        free(a)
        raise
    return a


cdef int _normalize(int64_t* row, Py_ssize_t n) nogil:
    cdef int64_t g = 0
    cdef Py_ssize_t j
    for j in range(n):
        if row[j] != 0:
            g = _gcd(g, row[j])
            if g == 1:
                return 0
    if g > 1:
        for j in range(n):
            row[j] = row[j] // g
    return 0


cdef Py_ssize_t _eliminate(int64_t* a, Py_ssize_t m, Py_ssize_t n, Py_ssize_t* piv) nogil:
    cdef Py_ssize_t r = 0, c, i, j, p
    cdef int64_t v, av, best, pv, b, g, ma, mb, t1, t2
    cdef int64_t* prow
    cdef int64_t* row
    for c in range(n):
        if r == m:
            break
        p = -1
        best = 0
        for i in range(r, m):
            v = a[i * n + c]
            if v != 0:
                av = -v if v < 0 else v
                if p < 0 or av < best:
                    p = i
                    best = av
        if p < 0:
            continue
        if p != r:
            for j in range(n):
                v = a[r * n + j]
                a[r * n + j] = a[p * n + j]
                a[p * n + j] = v
        prow = a + r * n
        if prow[c] < 0:
            for j in range(n):
                prow[j] = -prow[j]
        pv = prow[c]
        for i in range(m):
            if i == r:
                continue
            row = a + i * n
            b = row[c]
            if b == 0:
                continue
            g = _gcd(pv, b)
            ma = pv // g
            mb = b // g
            for j in range(n):
                if ma != 1:
                    if mul_ovf(ma, row[j], &t1):
                        return -1
                else:
                    t1 = row[j]
                if prow[j] != 0:
                    if mul_ovf(mb, prow[j], &t2):
                        return -1
                    if sub_ovf(t1, t2, &t1):
                        return -1
                if t1 == INT64_MIN:
                    return -1
                row[j] = t1
            _normalize(row, n)
        _normalize(prow, n)
        piv[r] = c
        r += 1
    return r


def rref_int(rows, Py_ssize_t ncols):
    """See :func:`hoinv._rref_py.rref_int`."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = ncols
    cdef Py_ssize_t rank, i, j
    if m == 0 or n == 0:
        return [], []
    cdef int64_t* a = _load(rows, m, n)
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc(n * sizeof(Py_ssize_t))
    if piv == NULL:
        free(a)
        raise MemoryError()
    try:
        with nogil:
            rank = _eliminate(a, m, n, piv)
        if rank < 0:
            raise OverflowError("int64 overflow during elimination")
        out = [[a[i * n + j] for j in range(n)] for i in range(rank)]
        return out, [piv[i] for i in range(rank)]
    finally:
        free(a)
        free(piv)


def matmul_int(x, y, Py_ssize_t ncols):
    """See :func:`hoinv._rref_py.matmul_int`."""
    cdef Py_ssize_t m = len(x)
    cdef Py_ssize_t k = len(y)
    cdef Py_ssize_t i, j, l
    cdef int64_t v, t, s
    if m == 0:
        return []
    if k == 0 or ncols == 0:
        return [[0] * ncols for _ in range(m)]
    cdef int64_t* xa = _load(x, m, k)
    cdef int64_t* ya
    cdef int64_t* out
    try:
        ya = _load(y, k, ncols)
    except BaseException:
        free(xa)
        raise
    out = <int64_t*> malloc(m * ncols * sizeof(int64_t))
    if out == NULL:
        free(xa)
        free(ya)
        raise MemoryError()
    cdef bint bad = False
    try:
        with nogil:
            for i in range(m * ncols):
                out[i] = 0
            for i in range(m):
                for l in range(k):
                    v = xa[i * k + l]
                    if v == 0:
                        continue
                    for j in range(ncols):
                        if ya[l * ncols + j] == 0:
                            continue
                        if mul_ovf(v, ya[l * ncols + j], &t) or add_ovf(out[i * ncols + j], t, &s):
                            bad = True
                            break
                        out[i * ncols + j] = s
                    if bad:
                        break
                if bad:
                    break
        if bad:
            raise OverflowError("int64 overflow during product")
        return [[out[i * ncols + j] for j in range(ncols)] for i in range(m)]
    finally:
        free(xa)
        free(ya)
        free(out)
