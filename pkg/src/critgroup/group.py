"""Critical groups, orders of vertex pairs and their certificate markings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .errors import MarkingError, ParseError
from .graph import Multigraph, format_graph, parse_graph_text
from .linalg import Cokernel, basis_difference, gcd_all


@dataclass(frozen=True)
class GroupStructure:
    """Finite abelian group  Z/d_1 x ... x Z/d_k  x  Z^free_rank."""

    torsion_factors: tuple
    free_rank: int = 0

    @property
    def order(self) -> int:
        return math.prod(self.torsion_factors)

    @property
    def exponent(self) -> int:
        return self.torsion_factors[-1] if self.torsion_factors else 1

    @property
    def rank(self) -> int:
        """Minimal number of generators of the torsion part."""
        return len(self.torsion_factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.torsion_factors) <= 1

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion_factors]
        parts += ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "0"


def group_from_cokernel(ck: Cokernel) -> GroupStructure:
    return GroupStructure(ck.torsion_factors, ck.free_rank)


def critical_group(G: Multigraph) -> GroupStructure:
    """Phi(G), the torsion part of Z^n / Im(M(G))."""
    G.require_connected()
    return group_from_cokernel(Cokernel(G.laplacian()))


@dataclass(frozen=True)
class Marking:
    """Certificate ``M(G) @ S == h * (e_i - e_j)`` for the pair (i, j)."""

    i: int
    j: int
    h: int
    S: tuple

    def normalized(self) -> "Marking":
        lo = min(self.S)
        return Marking(self.i, self.j, self.h, tuple(s - lo for s in self.S))

    def weight(self, v: int) -> int:
        return self.S[v - 1]

    @property
    def length(self) -> int:
        """s_j - s_i, the number of G_h blocks in the reduced string."""
        return self.S[self.j - 1] - self.S[self.i - 1]


def marking_problems(G: Multigraph, mk: Marking) -> list:
    """Human-readable list of violated marking conditions (empty if valid)."""
    n = G.n
    if len(mk.S) != n:
        return [f"weight vector has length {len(mk.S)}, graph has {n} vertices"]
    if not (1 <= mk.i <= n and 1 <= mk.j <= n) or mk.i == mk.j:
        return [f"bad marked pair ({mk.i}, {mk.j})"]
    problems = []
    if mk.h < 1:
        problems.append(f"order h={mk.h} is not positive")
    MS = G.laplacian().apply(mk.S)
    target = tuple(mk.h * x for x in basis_difference(n, mk.i, mk.j))
    if MS != target:
        problems.append("M(G) S != h E_ij")
    if gcd_all(s - mk.S[-1] for s in mk.S[:-1]) != 1:
        problems.append("weight differences are not coprime")
    si, sj = mk.weight(mk.i), mk.weight(mk.j)
    if si != min(mk.S):
        problems.append(f"s_{mk.i} is not the minimum weight")
    if sj != max(mk.S):
        problems.append(f"s_{mk.j} is not the maximum weight")
    local = sum((mk.weight(v) - si) * c for v, c in G.neighbors(mk.i).items())
    if local != mk.h:
        problems.append(f"h={mk.h} differs from the weighted degree {local} at v_{mk.i}")
    return problems


def verify_marking(G: Multigraph, mk: Marking) -> bool:
    return not marking_problems(G, mk)


def check_marking(G: Multigraph, mk: Marking, step=None):
    problems = marking_problems(G, mk)
    if problems:
        where = "" if step is None else f"{step}: "
        raise MarkingError(where + "; ".join(problems))


def _check_pair(G: Multigraph, i: int, j: int):
    if i == j:
        raise ValueError("a pair needs two distinct vertices")
    if not (1 <= i <= G.n and 1 <= j <= G.n):
        raise IndexError(f"pair ({i}, {j}) outside 1..{G.n}")


def pair_order(G: Multigraph, i: int, j: int) -> int:
    """Order of the class of e_i - e_j in Phi(G)."""
    _check_pair(G, i, j)
    G.require_connected()
    return _pair_order(Cokernel(G.laplacian()), i, j)


def _pair_order(ck: Cokernel, i: int, j: int) -> int:
    return ck.order_of_coords(ck.difference_coords(i, j))


def pair_orders(G: Multigraph) -> dict:
    """All pair orders ``{(i, j): h}`` for ``i < j`` from a single Smith form."""
    G.require_connected()
    ck = Cokernel(G.laplacian())
    return {
        (i, j): _pair_order(ck, i, j) for i in range(1, G.n + 1) for j in range(i + 1, G.n + 1)
    }


def marking(G: Multigraph, i: int, j: int) -> Marking:
    """The minimal certificate for (i, j), normalised so that s_i = 0."""
    _check_pair(G, i, j)
    G.require_connected()
    ck = Cokernel(G.laplacian())
    h = _pair_order(ck, i, j)
    S = ck.solve(tuple(h * x for x in basis_difference(G.n, i, j)))
    mk = Marking(i, j, h, tuple(S)).normalized()
    # minimal h forces coprime differences; anything else is a kernel bug
    check_marking(G, mk, step="marking")
    return mk


def pairing_self(G: Multigraph, i: int, j: int) -> Fraction:
    """<tau, tau> = (s_i - s_j) / h reduced into [0, 1)."""
    mk = marking(G, i, j)
    value = Fraction(mk.weight(i) - mk.weight(j), mk.h)
    return value - math.floor(value)


# -- marked graph text format ---------------------------------------------


def marking_from_weights(G: Multigraph, S: Sequence[int]) -> Marking:
    """Recover pair and order from a weight vector alone."""
    MS = G.laplacian().apply(tuple(S))
    pos = [k for k, x in enumerate(MS, 1) if x > 0]
    neg = [k for k, x in enumerate(MS, 1) if x < 0]
    if len(pos) != 1 or len(neg) != 1 or MS[pos[0] - 1] != -MS[neg[0] - 1]:
        raise MarkingError("weights do not satisfy M S = h E_ij for any pair")
    mk = Marking(pos[0], neg[0], MS[pos[0] - 1], tuple(S))
    check_marking(G, mk)
    return mk


def format_marked(G: Multigraph, mk: Marking) -> str:
    return format_graph(G, mk.S)


def parse_marked(text: str) -> tuple:
    G, weights = parse_graph_text(text)
    if not weights:
        raise ParseError("marked graph needs 'w <i> <weight>' lines")
    return G, marking_from_weights(G, [weights[v] for v in range(1, G.n + 1)])


# -- chains between two vertices -------------------------------------------


@dataclass(frozen=True)
class ChainGraph:
    """Vertices v and w joined by chains of lengths ``lengths``.

    ``chains[d-1][k-1]`` is the k-th interior vertex on chain d counting from v.
    """

    graph: Multigraph
    lengths: tuple
    v: int
    w: int
    chains: tuple

    def vertex(self, k: int, d: int) -> int:
        if k == 0:
            return self.v
        if k == self.lengths[d - 1]:
            return self.w
        return self.chains[d - 1][k - 1]


def chain_graph(*lengths: int) -> ChainGraph:
    if not lengths or any(n < 1 for n in lengths):
        raise ValueError("need at least one chain, each of length >= 1")
    v, w = 1, 2
    nxt = 3
    edges = []
    chains = []
    for n_d in lengths:
        interior = list(range(nxt, nxt + n_d - 1))
        nxt += n_d - 1
        walk = [v] + interior + [w]
        edges.extend(zip(walk, walk[1:]))
        chains.append(tuple(interior))
    G = Multigraph.from_edges(nxt - 1, edges)
    return ChainGraph(G, tuple(lengths), v, w, tuple(chains))


def chain_pair_order_formula(lengths: Sequence[int], target="w") -> int:
    """Closed-form order of {v, w} or {v, v_{k,d}} on a chain graph.

    ``target`` is ``"w"`` or an int k, meaning the k-th interior vertex of the
    last chain.  For ``"w"`` the order is ``lcm(n_i) * sum(1/n_i)``.  For k,
    P is the least multiple of ``lcm(n_1..n_{d-1})`` making
    ``Q = (P + (n_d - k) P sum_{i<d} 1/n_i) / k`` integral, and the order is
    ``(P/k) n_d sum(1/n_i)``.
    """
    lengths = tuple(lengths)
    if not lengths or any(n < 1 for n in lengths):
        raise ValueError("need at least one chain, each of length >= 1")
    total = sum(Fraction(1, n) for n in lengths)
    if target == "w":
        h = _lcm(lengths) * total
    else:
        k = int(target)
        n_d = lengths[-1]
        if not 1 <= k <= n_d - 1:
            raise ValueError(f"k={k} must lie in 1..{n_d - 1}")
        head = lengths[:-1]
        base = _lcm(head)
        head_sum = sum((Fraction(1, n) for n in head), Fraction(0))
        # P: weight of w; Q: weight step on the first k edges of the last chain
        P = base
        while True:
            Q = (P + (n_d - k) * P * head_sum) / k
            if Q.denominator == 1:
                break
            P += base
        h = Fraction(P, k) * n_d * total
    if h.denominator != 1:
        raise ArithmeticError(f"formula produced non-integer order {h}")
    return int(h)


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)
