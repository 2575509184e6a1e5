"""Slow reference computations that share no code with the Smith form.

Spanning trees are counted by brute force over edge subsets, and pair
orders by scanning h = 1, 2, ... against a Hermite basis of the column
lattice.  Both are meant for small graphs only.
"""

from __future__ import annotations

import itertools

from .graph import Multigraph
from .linalg import basis_difference, hermite_normal_form


def spanning_tree_count_bruteforce(G: Multigraph) -> int:
    """Count (n-1)-subsets of edges, copies distinguished, that form a tree."""
    n = G.n
    if n == 1:
        return 1
    copies = [(a, b) for a, b, c in G.edges for _ in range(c)]
    count = 0
    for subset in itertools.combinations(copies, n - 1):
        parent = list(range(n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in subset:
            ra, rb = find(a), find(b)
            if ra == rb:
                break
            parent[ra] = rb
        else:
            count += 1
    return count


def pair_order_bruteforce(G: Multigraph, i: int, j: int, limit: int | None = None) -> int:
    """Least h >= 1 with h (e_i - e_j) in the column span of M(G)."""
    basis = hermite_normal_form(G.laplacian())
    E = basis_difference(G.n, i, j)
    if limit is None:
        limit = spanning_tree_count_bruteforce(G)
    for h in range(1, limit + 1):
        if basis.contains(tuple(h * x for x in E)):
            return h
    raise ArithmeticError(f"no order found up to {limit}")


def is_spread_bruteforce(G: Multigraph) -> bool:
    """No difference vector lies in the column span of M(G)."""
    basis = hermite_normal_form(G.laplacian())
    n = G.n
    return not any(
        basis.contains(basis_difference(n, i, j))
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    )
