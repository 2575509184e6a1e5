"""Connected multigraphs: Laplacians, bridges, spanning trees, enumeration.

Vertices are numbered 1..n.  Loops are not representable: every edge has two
distinct endpoints.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import DisconnectedGraphError, ParseError
from .linalg import IntMatrix, determinant

DEFAULT_SIMPLE_LIMIT = 6
DEFAULT_MULTI_LIMIT = 4


@dataclass(frozen=True, order=True)
class EdgeRef:
    """One copy of a parallel-edge bundle: endpoints ``i < j``, ``copy < c_ij``."""

    i: int
    j: int
    copy: int = 0

    def __post_init__(self):
        if self.i >= self.j:
            raise ValueError(f"EdgeRef needs i < j, got ({self.i}, {self.j})")
        if self.copy < 0:
            raise ValueError("negative copy index")

    @classmethod
    def of(cls, u: int, v: int, copy: int = 0) -> "EdgeRef":
        return cls(min(u, v), max(u, v), copy)

    @property
    def endpoints(self) -> tuple:
        return (self.i, self.j)

    def other(self, v: int) -> int:
        return self.j if v == self.i else self.i


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph on vertices 1..n.

    ``edges`` is the canonical sorted tuple of ``(i, j, c)`` with ``i < j`` and
    multiplicity ``c >= 1``.  Build with :meth:`from_edges`.
    """

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        last = None
        for i, j, c in self.edges:
            if not (1 <= i < j <= self.n) or c < 1:
                raise ValueError(f"bad edge bundle {(i, j, c)} for n={self.n}")
            if last is not None and (i, j) <= last:
                raise ValueError("edges must be sorted and unique; use Multigraph.from_edges")
            last = (i, j)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable = ()) -> "Multigraph":
        """Accumulate ``(i, j)`` or ``(i, j, c)`` items; repeated pairs add up."""
        acc: dict = {}
        for e in edges:
            if len(e) == 2:
                (i, j), c = e, 1
            else:
                i, j, c = e
            if i == j:
                raise ValueError(f"loop at vertex {i}: edges need two distinct endpoints")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"edge ({i}, {j}) outside 1..{n}")
            if c < 0:
                raise ValueError("negative multiplicity")
            key = (min(i, j), max(i, j))
            acc[key] = acc.get(key, 0) + c
        return cls(n, tuple((i, j, c) for (i, j), c in sorted(acc.items()) if c))

    @classmethod
    def from_matrix(cls, M: IntMatrix) -> "Multigraph":
        """Inverse of :meth:`laplacian`; accepts either sign convention."""
        n = M.rows
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                c = M[i, j]
                if c != M[j, i]:
                    raise ValueError("matrix is not symmetric")
                edges.append((i + 1, j + 1, abs(c)))
        G = cls.from_edges(n, edges)
        if G.laplacian() != M and G.laplacian() != -M:
            raise ValueError("matrix is not a graph Laplacian")
        return G

    # -- structure -------------------------------------------------------

    @cached_property
    def adjacency(self) -> tuple:
        """``adjacency[v]`` maps neighbour -> multiplicity (index 0 unused)."""
        adj = [dict() for _ in range(self.n + 1)]
        for i, j, c in self.edges:
            adj[i][j] = c
            adj[j][i] = c
        return tuple(adj)

    def mult(self, i: int, j: int) -> int:
        return self.adjacency[i].get(j, 0)

    def neighbors(self, v: int) -> dict:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return sum(self.adjacency[v].values())

    @property
    def m(self) -> int:
        return sum(c for _, _, c in self.edges)

    @property
    def cycle_rank(self) -> int:
        """beta(G) = m - n + 1 (for connected G)."""
        return self.m - self.n + 1

    @property
    def is_simple(self) -> bool:
        return all(c == 1 for _, _, c in self.edges)

    def edge_refs(self) -> list:
        return [EdgeRef(i, j, k) for i, j, c in self.edges for k in range(c)]

    def components(self) -> list:
        seen = [False] * (self.n + 1)
        comps = []
        for s in range(1, self.n + 1):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                v = stack.pop()
                for w in self.adjacency[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    @cached_property
    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def require_connected(self):
        if not self.is_connected:
            raise DisconnectedGraphError(f"graph with {len(self.components())} components")

    def distances(self, src: int) -> list:
        """BFS distances from ``src``; -1 for unreachable (index 0 unused)."""
        dist = [-1] * (self.n + 1)
        dist[src] = 0
        q = deque([src])
        while q:
            v = q.popleft()
            for w in self.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return dist

    @property
    def diameter(self) -> int:
        self.require_connected()
        return max(max(self.distances(v)[1:]) for v in range(1, self.n + 1))

    # -- derived graphs --------------------------------------------------

    def with_multiplicity(self, i: int, j: int, c: int) -> "Multigraph":
        key = (min(i, j), max(i, j))
        rest = [(a, b, k) for a, b, k in self.edges if (a, b) != key]
        return Multigraph.from_edges(self.n, rest + [(key[0], key[1], c)])

    def induced(self, vertices: Iterable[int]) -> tuple:
        """Subgraph on ``vertices`` renumbered in increasing order.

        Returns ``(graph, old_to_new)``.
        """
        keep = sorted(set(vertices))
        index = {v: k + 1 for k, v in enumerate(keep)}
        edges = [(index[i], index[j], c) for i, j, c in self.edges if i in index and j in index]
        return Multigraph.from_edges(len(keep), edges), index

    # -- matrices --------------------------------------------------------

    def laplacian(self) -> IntMatrix:
        """M(G): multiplicities off the diagonal, minus degrees on it."""
        n = self.n
        rows = [[0] * n for _ in range(n)]
        for i, j, c in self.edges:
            rows[i - 1][j - 1] = c
            rows[j - 1][i - 1] = c
            rows[i - 1][i - 1] -= c
            rows[j - 1][j - 1] -= c
        return IntMatrix.from_rows(rows)

    def psd_laplacian(self) -> IntMatrix:
        """D - A, the positive-semidefinite convention (negation of M(G))."""
        return -self.laplacian()

    def __str__(self):
        return format_graph(self)


def laplacian_matrix(G: Multigraph) -> IntMatrix:
    return G.laplacian()


def spanning_tree_count(G: Multigraph) -> int:
    """kappa(G) via the reduced Laplacian determinant."""
    G.require_connected()
    if G.n == 1:
        return 1
    rows = G.psd_laplacian().tolist()
    reduced = IntMatrix.from_rows(r[:-1] for r in rows[:-1])
    return abs(determinant(reduced))


def bridges(G: Multigraph) -> set:
    """Endpoint pairs ``(i, j)``, ``i < j``, of edges whose removal disconnects G."""
    n = G.n
    disc = [0] * (n + 1)
    low = [0] * (n + 1)
    timer = 1
    found = set()
    for root in range(1, n + 1):
        if disc[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, 0, iter(G.adjacency[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w]:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(G.adjacency[w])))
                    advanced = True
                    break
            if advanced:
                continue
            stack.pop()
            if parent:
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent] and G.mult(parent, v) == 1:
                    found.add((min(parent, v), max(parent, v)))
    return found


def is_multiply_connected(G: Multigraph) -> bool:
    G.require_connected()
    return not bridges(G)


def enumerate_connected(n: int, max_mult: int = 1, limit: int | None = None) -> Iterator[Multigraph]:
    """Every labeled connected multigraph on n vertices with all ``c_ij <= max_mult``.

    Order is lexicographic in the multiplicity vector over pairs
    ``(1,2), (1,3), ..., (n-1,n)``.
    """
    if limit is None:
        limit = DEFAULT_SIMPLE_LIMIT if max_mult <= 1 else DEFAULT_MULTI_LIMIT
    if n > limit:
        raise ValueError(f"n={n} exceeds enumeration limit {limit}")
    if n < 1 or max_mult < 0:
        raise ValueError("need n >= 1 and max_mult >= 0")
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mults in itertools.product(range(max_mult + 1), repeat=len(pairs)):
        if not _connected(n, pairs, mults):
            continue
        yield Multigraph(n, tuple((i, j, c) for (i, j), c in zip(pairs, mults) if c))


def _connected(n, pairs, mults) -> bool:
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parts = n
    for (i, j), c in zip(pairs, mults):
        if c:
            a, b = find(i), find(j)
            if a != b:
                parent[a] = b
                parts -= 1
    return parts == 1


def random_connected_graph(n: int, rng: random.Random, p: float = 0.5, max_mult: int = 1) -> Multigraph:
    """Rejection-sample a connected graph; each pair present with probability p."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    while True:
        mults = [rng.randint(1, max_mult) if rng.random() < p else 0 for _ in pairs]
        if _connected(n, pairs, mults):
            return Multigraph(n, tuple((i, j, c) for (i, j), c in zip(pairs, mults) if c))


# -- families ------------------------------------------------------------


def path_graph(n: int) -> Multigraph:
    return Multigraph.from_edges(n, [(k, k + 1) for k in range(1, n)])


def cycle_graph(n: int) -> Multigraph:
    if n < 3:
        raise ValueError("a simple cycle needs n >= 3")
    return Multigraph.from_edges(n, [(k, k + 1) for k in range(1, n)] + [(n, 1)])


def complete_graph(n: int) -> Multigraph:
    return Multigraph.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def complete_bipartite(p: int, q: int) -> Multigraph:
    return Multigraph.from_edges(p + q, [(i, p + j) for i in range(1, p + 1) for j in range(1, q + 1)])


def bundle(h: int) -> Multigraph:
    """G_h: two vertices joined by h parallel edges."""
    return Multigraph.from_edges(2, [(1, 2, h)])


# -- text format ---------------------------------------------------------


def parse_graph_text(text: str) -> tuple:
    """Parse the graph format; returns ``(graph, weights)``.

    ``weights`` is a dict from the optional ``w <i> <weight>`` lines (empty
    when there are none).
    """
    n = None
    edges = []
    weights = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer field in {raw!r}") from None
        tag = parts[0]
        if tag == "n":
            if n is not None or len(nums) != 1 or nums[0] < 1:
                raise ParseError(f"line {lineno}: bad or repeated vertex-count header")
            n = nums[0]
        elif n is None:
            raise ParseError(f"line {lineno}: expected 'n <count>' header first")
        elif tag == "e":
            if len(nums) not in (2, 3):
                raise ParseError(f"line {lineno}: expected 'e <i> <j> [mult]'")
            i, j = nums[0], nums[1]
            c = nums[2] if len(nums) == 3 else 1
            if i == j:
                raise ParseError(f"line {lineno}: loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n) or c < 0:
                raise ParseError(f"line {lineno}: edge ({i}, {j}, {c}) out of range")
            edges.append((i, j, c))
        elif tag == "w":
            if len(nums) != 2 or not (1 <= nums[0] <= n) or nums[0] in weights:
                raise ParseError(f"line {lineno}: bad weight line")
            weights[nums[0]] = nums[1]
        else:
            raise ParseError(f"line {lineno}: unknown record {tag!r}")
    if n is None:
        raise ParseError("empty graph input")
    if weights and len(weights) != n:
        raise ParseError(f"weights given for {len(weights)} of {n} vertices")
    return Multigraph.from_edges(n, edges), weights


def parse_graph(text: str) -> Multigraph:
    return parse_graph_text(text)[0]


def format_graph(G: Multigraph, weights=None) -> str:
    out = [f"n {G.n}"]
    for i, j, c in G.edges:
        out.append(f"e {i} {j}" if c == 1 else f"e {i} {j} {c}")
    if weights is not None:
        out.extend(f"w {v} {weights[v - 1]}" for v in range(1, G.n + 1))
    return "\n".join(out) + "\n"
