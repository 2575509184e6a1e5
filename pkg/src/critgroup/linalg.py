"""Exact integer linear algebra: Smith/Hermite normal forms, determinants,
lattice membership and orders of classes in a cokernel.

All arithmetic uses Python integers.  The Smith elimination loop runs in the
compiled ``_snf_c`` kernel when it is importable and the entries fit in 64
bits; otherwise the pure-Python kernel is used.  Set ``CRITGROUP_PURE_PYTHON=1``
to force the fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from . import _snf_py
from .errors import DimensionError, ParseError

if os.environ.get("CRITGROUP_PURE_PYTHON"):
    _snf_c = None
else:
    try:
        from . import _snf_c
    except ImportError:
        _snf_c = None

BACKEND = "cython" if _snf_c is not None else "python"

INFINITE = math.inf


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(r == c) for r in range(n) for c in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[r] if r == c else 0 for r in range(n) for c in range(n)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> tuple:
        return self.entries[r * self.cols:(r + 1) * self.cols]

    def column(self, c: int) -> tuple:
        return self.entries[c::self.cols]

    def tolist(self) -> list:
        return [list(self.row(r)) for r in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(zip(*self.tolist())) if self.rows else IntMatrix(self.cols, 0, ())

    def apply(self, v: Sequence[int]) -> tuple:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.rows}x{self.cols} matrix")
        return tuple(sum(a * b for a, b in zip(self.row(r), v)) for r in range(self.rows))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ocols = [other.column(c) for c in range(other.cols)]
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(sum(a * b for a, b in zip(self.row(r), oc)) for r in range(self.rows) for oc in ocols),
        )

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def shift(self, mu: int) -> "IntMatrix":
        """Return ``self - mu * Id``."""
        if not self.is_square:
            raise DimensionError("shift needs a square matrix")
        n = self.cols
        return IntMatrix(
            self.rows, n, tuple(a - mu if k % (n + 1) == 0 else a for k, a in enumerate(self.entries))
        )

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")

    def __str__(self):
        return format_matrix(self)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    invariant_factors: tuple

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d)


@dataclass(frozen=True)
class LatticeBasis:
    """Column Hermite normal form of the lattice spanned by a matrix's columns.

    ``basis`` is upper triangular in echelon sense: column k has its pivot in
    row ``pivots[k]``, nothing below it, pivot rows strictly increase with k,
    pivots are positive and the entries to the right of a pivot in its row
    lie in ``[0, pivot)``.
    """

    dim: int
    basis: tuple
    pivots: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    def as_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(zip(*self.basis)) if self.basis else IntMatrix(self.dim, 0, ())

    def contains(self, w: Sequence[int]) -> bool:
        if len(w) != self.dim:
            raise DimensionError("vector length does not match lattice dimension")
        w = list(w)
        by_row = dict(zip(self.pivots, self.basis))
        for r in range(self.dim - 1, -1, -1):
            if not w[r]:
                continue
            col = by_row.get(r)
            if col is None:
                return False
            q, rem = divmod(w[r], col[r])
            if rem:
                return False
            for k in range(r + 1):
                w[k] -= q * col[k]
        return True


def _as_matrix(M) -> IntMatrix:
    return M if isinstance(M, IntMatrix) else IntMatrix.from_rows(M)


def _kernel(entries, rows, cols):
    if _snf_c is not None:
        try:
            return _snf_c.smith_kernel(entries, rows, cols)
        except OverflowError:
            pass
    return _snf_py.smith_kernel(entries, rows, cols)


def smith_normal_form(M) -> SmithDecomposition:
    """Smith normal form with unimodular transforms, ``U @ M @ V == D``.

    The invariant factors are the ``min(rows, cols)`` diagonal entries of D:
    nonnegative, each dividing the next, zeros last.
    """
    M = _as_matrix(M)
    if M.rows == 0 or M.cols == 0:
        raise DimensionError("empty matrix")
    U, D, V = _kernel(M.entries, M.rows, M.cols)
    factors = tuple(D[k][k] for k in range(min(M.rows, M.cols)))
    return SmithDecomposition(
        IntMatrix.from_rows(U), IntMatrix.from_rows(D), IntMatrix.from_rows(V), factors
    )


def invariant_factors(M) -> tuple:
    return smith_normal_form(M).invariant_factors


def determinant(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = _as_matrix(M)
    if not M.is_square:
        raise DimensionError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    A = M.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i = A[i]
            row_k = A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def is_positive_definite(M) -> bool:
    """Sylvester's criterion with exact leading principal minors."""
    M = _as_matrix(M)
    if not M.is_square or M != M.transpose():
        return False
    rows = M.tolist()
    return all(
        determinant(IntMatrix.from_rows(r[:k] for r in rows[:k])) > 0 for k in range(1, M.rows + 1)
    )


def basis_difference(n: int, i: int, j: int) -> tuple:
    """``e_i - e_j`` in Z^n, 1-based indices."""
    if i == j:
        raise ValueError("basis_difference needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i}, {j}) out of range 1..{n}")
    v = [0] * n
    v[i - 1] = 1
    v[j - 1] = -1
    return tuple(v)


class Cokernel:
    """The group Z^rows / Im(M), via one Smith decomposition of M.

    Coordinates of a vector ``w`` are ``U @ w``; coordinate k lives in
    ``Z / d_k`` where ``d_k`` is the k-th diagonal entry (0 beyond the
    diagonal, giving free factors).
    """

    def __init__(self, M):
        self.matrix = _as_matrix(M)
        self.snf = smith_normal_form(self.matrix)
        rows = self.matrix.rows
        diag = list(self.snf.invariant_factors) + [0] * (rows - len(self.snf.invariant_factors))
        self.diagonal = tuple(diag)
        self._U = self.snf.U.tolist()
        self._Ucols = [self.snf.U.column(c) for c in range(rows)]

    @property
    def torsion_factors(self) -> tuple:
        return tuple(d for d in self.diagonal if d > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.diagonal if d == 0)

    def coords(self, w: Sequence[int]) -> tuple:
        if len(w) != self.matrix.rows:
            raise DimensionError(f"vector of length {len(w)} for {self.matrix.rows}-row matrix")
        return tuple(sum(a * b for a, b in zip(row, w)) for row in self._U)

    def difference_coords(self, i: int, j: int) -> tuple:
        """Coordinates of ``e_i - e_j`` (1-based) without a full product."""
        ci = self._Ucols[i - 1]
        cj = self._Ucols[j - 1]
        return tuple(a - b for a, b in zip(ci, cj))

    def order_of_coords(self, y: Sequence[int]):
        h = 1
        for d, yk in zip(self.diagonal, y):
            if d == 0:
                if yk:
                    return INFINITE
            elif yk % d:
                k = d // math.gcd(d, yk)
                h = h * k // math.gcd(h, k)
        return h

    def order(self, w: Sequence[int]):
        return self.order_of_coords(self.coords(w))

    def contains_coords(self, y: Sequence[int]) -> bool:
        return all((yk == 0) if d == 0 else (yk % d == 0) for d, yk in zip(self.diagonal, y))

    def contains(self, w: Sequence[int]) -> bool:
        return self.contains_coords(self.coords(w))

    def solve(self, w: Sequence[int]):
        """Integer S with ``M @ S == w``, or None."""
        y = self.coords(w)
        if not self.contains_coords(y):
            return None
        ncols = self.matrix.cols
        z = [y[k] // self.diagonal[k] if k < ncols and self.diagonal[k] else 0 for k in range(ncols)]
        return self.snf.V.apply(z)


def lattice_solve(M, w: Sequence[int]):
    """Return an integer vector S with ``M @ S == w``, or None if w is not in Im(M)."""
    return Cokernel(M).solve(tuple(w))


def cokernel_class_order(M, w: Sequence[int]):
    """Order of the class of w in Z^n / Im(M): a positive int or ``INFINITE``."""
    return Cokernel(M).order(tuple(w))


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(M) -> LatticeBasis:
    """Column Hermite normal form of Im(M), independent of the Smith kernel."""
    M = _as_matrix(M)
    n = M.rows
    cols = [list(M.column(c)) for c in range(M.cols)]
    cols = [c for c in cols if any(c)]
    found = []
    for r in range(n - 1, -1, -1):
        active = [c for c in cols if c[r]]
        rest = [c for c in cols if not c[r]]
        if not active:
            continue
        pivot = active[0]
        for other in active[1:]:
            g, x, y = _xgcd(pivot[r], other[r])
            a, b = pivot[r] // g, other[r] // g
            # [[x, y], [-b, a]] is unimodular
            new_pivot = [x * p + y * o for p, o in zip(pivot, other)]
            leftover = [a * o - b * p for p, o in zip(pivot, other)]
            pivot = new_pivot
            if any(leftover):
                rest.append(leftover)
        if pivot[r] < 0:
            pivot = [-x for x in pivot]
        found.append((r, pivot))
        cols = rest
    found.reverse()
    # reduce entries right of each pivot into [0, pivot)
    basis = [list(c) for _, c in found]
    pivots = [r for r, _ in found]
    for m in range(1, len(basis)):
        for k in range(m - 1, -1, -1):
            r = pivots[k]
            q = basis[m][r] // basis[k][r]
            if q:
                basis[m] = [a - q * b for a, b in zip(basis[m], basis[k])]
    return LatticeBasis(n, tuple(tuple(c) for c in basis), tuple(pivots))


def gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


# ---------------------------------------------------------------------------
# text format


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``m <rows> <cols>`` followed by ``rows`` lines of integers."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty matrix input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "m":
        raise ParseError(f"expected header 'm <rows> <cols>', got {lines[0]!r}")
    try:
        rows, cols = int(head[1]), int(head[2])
        body = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if rows <= 0 or cols <= 0:
        raise ParseError("matrix dimensions must be positive")
    if len(body) != rows or any(len(r) != cols for r in body):
        raise ParseError(f"expected {rows} rows of {cols} integers")
    return IntMatrix.from_rows(body)


def format_matrix(M: IntMatrix) -> str:
    out = [f"m {M.rows} {M.cols}"]
    out.extend(" ".join(str(x) for x in M.row(r)) for r in range(M.rows))
    return "\n".join(out) + "\n"
