"""Spread matrices and collapsed values.

An integer matrix M is spread when no difference vector E_ij = e_i - e_j lies
in Im(M).  M is mu-collapsed when M - mu*Id is not spread.  Every collapsed
value comes with an integer witness v, (M - mu*Id) v = E_ij, that is checked
again by multiplication before it is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, InvariantError
from .graph import Multigraph
from .linalg import Cokernel, IntMatrix, basis_difference


@dataclass(frozen=True)
class NormBound:
    """Certified integer B >= ||M||, from the Frobenius norm."""

    frobenius_squared: int
    bound: int

    @property
    def radius(self) -> int:
        # collapsed values satisfy |mu| <= ||M|| + sqrt(2) < B + 2
        return self.bound + 2


def norm_bound(M: IntMatrix) -> NormBound:
    f2 = sum(a * a for a in M.entries)
    B = math.isqrt(f2)
    if B * B < f2:
        B += 1
    return NormBound(f2, B)


def spectral_norm_estimate(M: IntMatrix, iterations: int = 200) -> float:
    """Approximate ||M|| by power iteration on M^t M.  Informational only."""
    n = M.cols
    if n == 0:
        return 0.0
    rows = [list(map(float, M.row(r))) for r in range(M.rows)]
    x = [1.0 + k / (n + 1) for k in range(n)]
    est = 0.0
    for _ in range(iterations):
        y = [sum(a * b for a, b in zip(row, x)) for row in rows]
        z = [sum(rows[r][c] * y[r] for r in range(M.rows)) for c in range(n)]
        norm = math.sqrt(sum(t * t for t in z))
        if norm == 0.0:
            return 0.0
        est = math.sqrt(norm / math.sqrt(sum(t * t for t in x)))
        x = [t / norm for t in z]
    return est


def _require_square(M: IntMatrix):
    if not M.is_square:
        raise DimensionError(f"need a square matrix, got {M.rows}x{M.cols}")


def collapse_witness(M: IntMatrix, mu: int = 0):
    """``(i, j, v)`` with ``(M - mu Id) v == E_ij`` and i < j, or None."""
    _require_square(M)
    A = M.shift(mu)
    ck = Cokernel(A)
    n = M.rows
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if ck.contains_coords(ck.difference_coords(i, j)):
                v = ck.solve(basis_difference(n, i, j))
                return i, j, tuple(v)
    return None


def is_spread(M: IntMatrix) -> bool:
    return collapse_witness(M, 0) is None


def check_witness(M: IntMatrix, mu: int, witness) -> bool:
    i, j, v = witness
    return M.shift(mu).apply(v) == basis_difference(M.rows, i, j)


@dataclass
class CollapsedReport:
    matrix: IntMatrix
    lo: int
    hi: int
    witnesses: dict = field(default_factory=dict)

    @property
    def collapsed(self) -> list:
        return sorted(self.witnesses)

    def spread_at(self, mu: int) -> bool:
        if not self.lo <= mu <= self.hi:
            raise ValueError(f"mu={mu} outside the scanned interval [{self.lo}, {self.hi}]")
        return mu not in self.witnesses

    def verify(self) -> bool:
        return all(check_witness(self.matrix, mu, w) for mu, w in self.witnesses.items())


def default_interval(M: IntMatrix) -> tuple:
    r = norm_bound(M).radius
    return -r, r


def collapsed_values(M: IntMatrix, lo: int | None = None, hi: int | None = None) -> CollapsedReport:
    """Decide spreadness of ``M - mu Id`` for every integer mu in [lo, hi].

    Omitted bounds default to the certified radius from :func:`norm_bound`,
    outside of which no collapsed value can exist.
    """
    _require_square(M)
    dlo, dhi = default_interval(M)
    lo = dlo if lo is None else lo
    hi = dhi if hi is None else hi
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    report = CollapsedReport(M, lo, hi)
    for mu in range(lo, hi + 1):
        w = collapse_witness(M, mu)
        if w is not None:
            if not check_witness(M, mu, w):
                raise InvariantError(f"witness for mu={mu} does not multiply back", step="collapsed")
            report.witnesses[mu] = w
    return report


def eigenvector_collapse_pairs(M: IntMatrix) -> set:
    """mu = lambda +- 1 for every difference vector E_ij that is an eigenvector."""
    _require_square(M)
    n = M.rows
    out = set()
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            E = basis_difference(n, i, j)
            ME = M.apply(E)
            lam = ME[i - 1]
            if ME != tuple(lam * x for x in E):
                continue
            for mu, v in ((lam - 1, E), (lam + 1, tuple(-x for x in E))):
                if not check_witness(M, mu, (i, j, v)):
                    raise InvariantError(f"eigenvector witness fails at mu={mu}", step="eigenvector")
                out.add(mu)
    return out


# -- families with many collapsed values -----------------------------------


def many_collapsed_graph(n: int) -> Multigraph:
    """Graph on an even number n >= 8 of vertices with 1 + n/2 collapsed values.

    Vertices 1, 2 see everything; 3, 4 see 1, 2 and the middle block
    5..n-2; the middle block sees 1..4; the last two see only 1 and 2.
    """
    if n < 8 or n % 2:
        raise ValueError(f"n must be even and at least 8, got {n}")
    middle = range(5, n - 1)
    edges = [(1, 2)]
    edges += [(a, v) for a in (1, 2) for v in range(3, n + 1)]
    edges += [(a, v) for a in (3, 4) for v in middle]
    return Multigraph.from_edges(n, edges)


def expected_many_collapsed(n: int) -> set:
    """-(n+1), -(n-1), -(n-3), ..., -3, -1."""
    return {-(n + 1)} | set(range(-(n - 1), 0, 2))


def two_by_two(a: int) -> IntMatrix:
    return IntMatrix.from_rows([[-a, 1], [1, a]])


def block_family(k: int) -> IntMatrix:
    """Block diagonal with blocks two_by_two(1) + 5i Id for i = 1..k."""
    if k < 1:
        raise ValueError("need at least one block")
    n = 2 * k
    rows = [[0] * n for _ in range(n)]
    for i in range(1, k + 1):
        r = 2 * (i - 1)
        rows[r][r] = -1 + 5 * i
        rows[r][r + 1] = rows[r + 1][r] = 1
        rows[r + 1][r + 1] = 1 + 5 * i
    return IntMatrix.from_rows(rows)


@dataclass(frozen=True)
class DoubleRootFamily:
    """M = ((2l, 1), (-l^2, 0)) with l = p + 1 mod p^2 for each listed prime p."""

    primes: tuple
    ell: int
    matrix: IntMatrix
    expected: frozenset
    witnesses: dict


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple:
    """Least non-negative x with x = r_k mod m_k (pairwise coprime moduli)."""
    x, m = 0, 1
    for r, mk in zip(residues, moduli):
        if math.gcd(m, mk) != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = ((r - x) * pow(m, -1, mk)) % mk
        x += m * t
        m *= mk
    return x % m, m


def double_root_witness(ell: int, mu: int):
    """(s1, s2) solving (M - mu Id)(s1, s2)^t = (1, -1)^t, or None if not integral."""
    den = (mu - ell) ** 2
    if den == 0:
        return None
    s1 = Fraction(1 - mu, den)
    s2 = Fraction(ell * ell - 2 * ell + mu, den)
    if s1.denominator != 1 or s2.denominator != 1:
        return None
    return int(s1), int(s2)


def double_root_family(primes: Sequence[int]) -> DoubleRootFamily:
    primes = tuple(primes)
    if not primes:
        raise ValueError("need at least one prime")
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    for p in primes:
        if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
    ell, m = crt([p + 1 for p in primes], [p * p for p in primes])
    if ell == 0:
        ell = m
    M = IntMatrix.from_rows([[2 * ell, 1], [-ell * ell, 0]])
    witnesses = {}
    for p in primes:
        mu = ell - p
        s = double_root_witness(ell, mu)
        if s is None or not check_witness(M, mu, (1, 2, s)):
            raise InvariantError(f"no integral witness at mu={mu}", step="double root family")
        witnesses[mu] = (1, 2, s)
    return DoubleRootFamily(primes, ell, M, frozenset(witnesses), witnesses)


# -- bounds for graph Laplacians and positive definite matrices -------------


@dataclass(frozen=True)
class LaplacianScan:
    graph: Multigraph
    lo: int
    hi: int
    collapsed: tuple
    allowed: tuple

    @property
    def holds(self) -> bool:
        lo, hi = self.allowed
        return all(lo <= mu <= hi for mu in self.collapsed)


def laplacian_scan(G: Multigraph, margin: int | None = None, allow_multigraph: bool = False) -> LaplacianScan:
    """Collapsed values of D - A over [-n - margin, 2n + margin].

    For simple graphs every collapsed value must lie in [0, n + 1].  For
    multigraphs only the lower half of that claim is asserted (no collapsed
    value below 0).
    """
    G.require_connected()
    if not G.is_simple and not allow_multigraph:
        raise ValueError("the [0, n+1] bound is for simple graphs; pass allow_multigraph")
    n = G.n
    if margin is None:
        margin = n + 4
    lo, hi = -n - margin, 2 * n + margin
    report = collapsed_values(G.psd_laplacian(), lo, hi)
    allowed = (0, n + 1) if G.is_simple else (0, math.inf)
    return LaplacianScan(G, lo, hi, tuple(report.collapsed), allowed)


def _sign_root2(a: Fraction, b: Fraction) -> int:
    """Sign of a + b sqrt(2), exactly."""
    if a >= 0 and b >= 0:
        return 1 if (a or b) else 0
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 2 b^2
    diff = a * a - 2 * b * b
    if diff == 0:
        return 0
    return (1 if a > 0 else -1) if diff > 0 else (1 if b > 0 else -1)


def char_poly(rows) -> list:
    """Coefficients c_0..c_n of det(t Id - A), exact (Faddeev-LeVerrier)."""
    n = len(rows)
    A = [[Fraction(x) for x in r] for r in rows]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prev = Mk
        Mk = [
            [sum(A[r][t] * prev[t][c] for t in range(n)) + (coeffs[n - k + 1] if r == c else 0)
             for c in range(n)]
            for r in range(n)
        ]
        AM = [[sum(A[r][t] * Mk[t][c] for t in range(n)) for c in range(n)] for r in range(n)]
        coeffs[n - k] = -sum(AM[r][r] for r in range(n)) / k
    return coeffs


def _poly_at_mu_plus_root2(coeffs, mu: int) -> tuple:
    """p(mu + sqrt 2) as (a, b) meaning a + b sqrt(2)."""
    a, b = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        # (a + b r)(mu + r) + c with r^2 = 2
        a, b = a * mu + 2 * b + c, a + b * mu
    return a, b


def smallest_eigenvalue_at_most(A: IntMatrix, mu: int) -> bool:
    """Exactly decide lambda_min(A) <= mu + sqrt(2) for symmetric A.

    lambda_min > t  iff  A - t Id is positive definite iff every leading
    minor det(A_k - t Id) = (-1)^k charpoly_k(t) is positive.
    """
    _require_square(A)
    if A != A.transpose():
        raise ValueError("need a symmetric matrix")
    rows = A.tolist()
    for k in range(1, A.rows + 1):
        sub = [r[:k] for r in rows[:k]]
        a, b = _poly_at_mu_plus_root2(char_poly(sub), mu)
        sign = _sign_root2(a, b) * (-1) ** k
        if sign <= 0:
            return True
    return False
