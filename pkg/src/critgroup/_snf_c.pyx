# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Smith normal form kernel on 64-bit integers.

Same pivot sequence as ``_snf_py.smith_kernel``.  Every multiply, add and
subtract is overflow-checked; on overflow ``OverflowError`` is raised and the
caller reruns the pure-Python bigint kernel.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    #include <limits.h>
    static inline int cg_axpy(long long a, long long q, long long b, long long *out) {
        /* out = a - q*b */
        long long p;
        if (__builtin_mul_overflow(q, b, &p)) return 1;
        if (__builtin_sub_overflow(a, p, out)) return 1;
        return 0;
    }
    static inline int cg_add(long long a, long long b, long long *out) {
        return __builtin_add_overflow(a, b, out);
    }
    static inline long long cg_floordiv(long long a, long long b) {
        long long q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
        return q;
    }
    """
    int cg_axpy(long long a, long long q, long long b, long long *out) nogil
    int cg_add(long long a, long long b, long long *out) nogil
    long long cg_floordiv(long long a, long long b) nogil

cdef long long LL_MIN = -9223372036854775807 - 1


cdef inline long long _abs(long long a) nogil:
    return -a if a < 0 else a


cdef void _swap_rows(long long *M, Py_ssize_t ncol, Py_ssize_t i, Py_ssize_t k) nogil:
    cdef Py_ssize_t c
    cdef long long tmp
    for c in range(ncol):
        tmp = M[i * ncol + c]
        M[i * ncol + c] = M[k * ncol + c]
        M[k * ncol + c] = tmp


cdef void _swap_cols(long long *M, Py_ssize_t nrow, Py_ssize_t ncol, Py_ssize_t j, Py_ssize_t k) nogil:
    cdef Py_ssize_t r
    cdef long long tmp
    for r in range(nrow):
        tmp = M[r * ncol + j]
        M[r * ncol + j] = M[r * ncol + k]
        M[r * ncol + k] = tmp


cdef int _reduce(long long *A, long long *U, long long *V,
                 Py_ssize_t rows, Py_ssize_t cols) nogil:
    """Returns 0 on success, 1 on overflow."""
    cdef Py_ssize_t t, i, j, c, r, pi, pj, best_k, bad
    cdef long long a, p, q, best, absa
    cdef int best_is_row
    cdef Py_ssize_t tmax = rows if rows < cols else cols

    for t in range(tmax):
        best = -1
        pi = -1
        pj = -1
        for i in range(t, rows):
            for j in range(t, cols):
                a = A[i * cols + j]
                if a != 0:
                    if a == LL_MIN:
                        return 1
                    absa = _abs(a)
                    if best < 0 or absa < best:
                        best = absa
                        pi = i
                        pj = j
                        if absa == 1:
                            break
            if best == 1:
                break
        if best < 0:
            break
        if pi != t:
            _swap_rows(A, cols, t, pi)
            _swap_rows(U, rows, t, pi)
        if pj != t:
            _swap_cols(A, rows, cols, t, pj)
            _swap_cols(V, cols, cols, t, pj)

        while True:
            p = A[t * cols + t]
            for i in range(t + 1, rows):
                a = A[i * cols + t]
                if a != 0:
                    if a == LL_MIN:
                        return 1
                    q = cg_floordiv(a, p)
                    if q != 0:
                        for c in range(t, cols):
                            if cg_axpy(A[i * cols + c], q, A[t * cols + c], &A[i * cols + c]):
                                return 1
                        for c in range(rows):
                            if cg_axpy(U[i * rows + c], q, U[t * rows + c], &U[i * rows + c]):
                                return 1
            for j in range(t + 1, cols):
                a = A[t * cols + j]
                if a != 0:
                    if a == LL_MIN:
                        return 1
                    q = cg_floordiv(a, p)
                    if q != 0:
                        for r in range(t, rows):
                            if cg_axpy(A[r * cols + j], q, A[r * cols + t], &A[r * cols + j]):
                                return 1
                        for r in range(cols):
                            if cg_axpy(V[r * cols + j], q, V[r * cols + t], &V[r * cols + j]):
                                return 1

            best = -1
            best_k = -1
            best_is_row = 0
            for i in range(t + 1, rows):
                a = A[i * cols + t]
                if a != 0:
                    if a == LL_MIN:
                        return 1
                    if best < 0 or _abs(a) < best:
                        best = _abs(a)
                        best_k = i
                        best_is_row = 1
            for j in range(t + 1, cols):
                a = A[t * cols + j]
                if a != 0:
                    if a == LL_MIN:
                        return 1
                    if best < 0 or _abs(a) < best:
                        best = _abs(a)
                        best_k = j
                        best_is_row = 0
            if best_k >= 0:
                if best_is_row:
                    _swap_rows(A, cols, t, best_k)
                    _swap_rows(U, rows, t, best_k)
                else:
                    _swap_cols(A, rows, cols, t, best_k)
                    _swap_cols(V, cols, cols, t, best_k)
                continue

            if p == 1 or p == -1:
                break
            bad = -1
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i * cols + j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            for c in range(t, cols):
                if cg_add(A[t * cols + c], A[bad * cols + c], &A[t * cols + c]):
                    return 1
            for c in range(rows):
                if cg_add(U[t * rows + c], U[bad * rows + c], &U[t * rows + c]):
                    return 1

        if A[t * cols + t] < 0:
            for c in range(cols):
                if A[t * cols + c] == LL_MIN:
                    return 1
                A[t * cols + c] = -A[t * cols + c]
            for c in range(rows):
                if U[t * rows + c] == LL_MIN:
                    return 1
                U[t * rows + c] = -U[t * rows + c]
    return 0


cdef list _unpack(long long *M, Py_ssize_t nrow, Py_ssize_t ncol):
    return [[M[r * ncol + c] for c in range(ncol)] for r in range(nrow)]


def smith_kernel(entries, Py_ssize_t rows, Py_ssize_t cols):
    """Same contract as ``_snf_py.smith_kernel``; raises OverflowError."""
    cdef long long *A = <long long *> malloc(max(rows * cols, 1) * sizeof(long long))
    cdef long long *U = <long long *> malloc(max(rows * rows, 1) * sizeof(long long))
    cdef long long *V = <long long *> malloc(max(cols * cols, 1) * sizeof(long long))
    cdef Py_ssize_t k, r, c
    cdef int status
    if A == NULL or U == NULL or V == NULL:
        free(A)
        free(U)
        free(V)
        raise MemoryError()
    try:
        for k in range(rows * cols):
            # raises OverflowError for entries outside int64
            A[k] = entries[k]
        for r in range(rows):
            for c in range(rows):
                U[r * rows + c] = 1 if r == c else 0
        for r in range(cols):
            for c in range(cols):
                V[r * cols + c] = 1 if r == c else 0
        with nogil:
            status = _reduce(A, U, V, rows, cols)
        if status:
            raise OverflowError("int64 overflow in Smith kernel")
        return _unpack(U, rows, rows), _unpack(A, rows, cols), _unpack(V, cols, cols)
    finally:
        free(A)
        free(U)
        free(V)
