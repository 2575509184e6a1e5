"""Pure-Python Smith normal form kernel.

Reference implementation of the elimination loop shared with the compiled
kernel in ``_snf_c.pyx``.  Both follow the same pivot sequence, so for any
input where the compiled kernel does not overflow the two return identical
``(U, D, V)`` triples.
"""


def _min_abs_in_block(A, t, rows, cols):
    best = None
    best_pos = None
    for i in range(t, rows):
        row = A[i]
        for j in range(t, cols):
            a = row[j]
            if a:
                a = abs(a)
                if best is None or a < best:
                    best = a
                    best_pos = (i, j)
                    if a == 1:
                        return best_pos
    return best_pos


def _swap_rows(A, i, k):
    A[i], A[k] = A[k], A[i]


def _swap_cols(A, j, k):
    for row in A:
        row[j], row[k] = row[k], row[j]


def smith_kernel(entries, rows, cols):
    """Diagonalise an integer matrix by unimodular row and column operations.

    ``entries`` is row-major.  Returns ``(U, D, V)`` as lists of rows with
    ``U @ A @ V == D``, nonnegative diagonal, divisibility chain along the
    diagonal and zeros trailing.
    """
    A = [list(entries[r * cols:(r + 1) * cols]) for r in range(rows)]
    U = [[int(r == c) for c in range(rows)] for r in range(rows)]
    V = [[int(r == c) for c in range(cols)] for r in range(cols)]

    for t in range(min(rows, cols)):
        pos = _min_abs_in_block(A, t, rows, cols)
        if pos is None:
            break
        pi, pj = pos
        if pi != t:
            _swap_rows(A, t, pi)
            _swap_rows(U, t, pi)
        if pj != t:
            _swap_cols(A, t, pj)
            _swap_cols(V, t, pj)

        while True:
            p = A[t][t]
            prow = A[t]
            urow = U[t]
            for i in range(t + 1, rows):
                a = A[i][t]
                if a:
                    q = a // p
                    if q:
                        row = A[i]
                        for c in range(t, cols):
                            row[c] -= q * prow[c]
                        row = U[i]
                        for c in range(rows):
                            row[c] -= q * urow[c]
            for j in range(t + 1, cols):
                a = prow[j]
                if a:
                    q = a // p
                    if q:
                        for r in range(t, rows):
                            A[r][j] -= q * A[r][t]
                        for r in range(cols):
                            V[r][j] -= q * V[r][t]

            # smallest leftover in pivot column/row becomes the new pivot
            best = None
            best_at = None
            for i in range(t + 1, rows):
                a = A[i][t]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    best_at = ("r", i)
            for j in range(t + 1, cols):
                a = prow[j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    best_at = ("c", j)
            if best_at is not None:
                kind, k = best_at
                if kind == "r":
                    _swap_rows(A, t, k)
                    _swap_rows(U, t, k)
                else:
                    _swap_cols(A, t, k)
                    _swap_cols(V, t, k)
                continue

            bad = None
            for i in range(t + 1, rows):
                row = A[i]
                for j in range(t + 1, cols):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row = A[bad]
            for c in range(t, cols):
                prow[c] += row[c]
            row = U[bad]
            for c in range(rows):
                urow[c] += row[c]

        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]

    return U, A, V
