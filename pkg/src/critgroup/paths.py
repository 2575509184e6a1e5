"""Combinatorial certificates for pairs of order 1 and 2.

A system of h paths between v_i and v_j is a family of h equal-length paths
whose k-th edges, removed together, separate v_i from v_j for every k.  Such
a system exhibits a marking of order h when the paths share no edge, or when
h = 2 (shared edges then count twice).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .errors import MarkingError, SearchBudgetExceeded
from .graph import EdgeRef, Multigraph, bridges, is_multiply_connected
from .group import Marking, check_marking

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class Path:
    """Vertex sequence plus, for each step, which parallel copy is used."""

    vertices: tuple
    copies: tuple = None

    def __post_init__(self):
        if self.copies is None:
            object.__setattr__(self, "copies", (0,) * (len(self.vertices) - 1))
        if len(self.copies) != len(self.vertices) - 1:
            raise ValueError("need one copy index per step")

    @property
    def length(self) -> int:
        return len(self.copies)

    def edges(self) -> tuple:
        return tuple(
            EdgeRef.of(a, b, c) for a, b, c in zip(self.vertices, self.vertices[1:], self.copies)
        )


@dataclass(frozen=True)
class PathSystem:
    source: int
    target: int
    paths: tuple

    @property
    def h(self) -> int:
        return len(self.paths)

    @property
    def length(self) -> int:
        return self.paths[0].length if self.paths else 0

    def layer(self, k: int) -> set:
        """Distinct edges numbered k (1-based) across all paths."""
        return {p.edges()[k - 1] for p in self.paths}


def _check_well_formed(G: Multigraph, PS: PathSystem):
    for v in (PS.source, PS.target):
        if not 1 <= v <= G.n:
            raise ValueError(f"vertex {v} not in graph")
    for p in PS.paths:
        if not p.vertices or p.vertices[0] != PS.source or p.vertices[-1] != PS.target:
            raise ValueError(f"path {p.vertices} does not run from {PS.source} to {PS.target}")
        for e in p.edges():
            if e.copy >= G.mult(e.i, e.j):
                raise ValueError(f"edge {e} is not in the graph")


def _separates(G: Multigraph, removed, s: int, t: int) -> bool:
    cut = {}
    for e in removed:
        cut[e.endpoints] = cut.get(e.endpoints, 0) + 1
    seen = {s}
    q = deque([s])
    while q:
        v = q.popleft()
        for w, c in G.neighbors(v).items():
            if w not in seen and c > cut.get((min(v, w), max(v, w)), 0):
                if w == t:
                    return False
                seen.add(w)
                q.append(w)
    return t not in seen


def path_system_problems(G: Multigraph, PS: PathSystem) -> list:
    """Violated system conditions; raises ValueError for malformed input."""
    _check_well_formed(G, PS)
    if not PS.paths:
        return ["empty system"]
    if PS.source == PS.target:
        return ["source equals target"]
    lengths = {p.length for p in PS.paths}
    if len(lengths) != 1:
        return [f"paths have different lengths {sorted(lengths)}"]
    problems = []
    edge_lists = [p.edges() for p in PS.paths]
    if len(set(edge_lists)) != len(edge_lists):
        problems.append("repeated path")
    for p, es in zip(PS.paths, edge_lists):
        if len(set(es)) != len(es):
            problems.append(f"path {p.vertices} reuses an edge")
    vertex_no = {}
    edge_no = {}
    for p, es in zip(PS.paths, edge_lists):
        for pos, v in enumerate(p.vertices):
            if vertex_no.setdefault(v, pos) != pos:
                problems.append(f"vertex {v} numbered both {vertex_no[v]} and {pos}")
        for pos, e in enumerate(es, 1):
            if edge_no.setdefault(e, pos) != pos:
                problems.append(f"edge {e} numbered both {edge_no[e]} and {pos}")
    ell = PS.length
    for k in range(1, ell + 1):
        if not _separates(G, PS.layer(k), PS.source, PS.target):
            problems.append(f"removing the edges numbered {k} does not separate the ends")
    if G.distances(PS.source)[PS.target] != ell:
        problems.append("paths are not shortest paths")
    return problems


def verify_path_system(G: Multigraph, PS: PathSystem) -> bool:
    return not path_system_problems(G, PS)


def order_one_pair(G: Multigraph, i: int, j: int) -> bool:
    """True iff v_i and v_j are joined by a path made of bridges."""
    G.require_connected()
    if i == j:
        raise ValueError("a pair needs two distinct vertices")
    adj = {}
    for a, b in bridges(G):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {i}
    stack = [i]
    while stack:
        v = stack.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return j in seen


def spread_check(G: Multigraph) -> bool:
    """Laplacian spread <=> no order-1 pair <=> bridgeless."""
    return is_multiply_connected(G)


def shortest_paths(G: Multigraph, i: int, j: int):
    """Every shortest v_i - v_j path, parallel copies distinguished."""
    dist = G.distances(i)
    if dist[j] < 0:
        return
    back = G.distances(j)
    d = dist[j]

    def extend(prefix, copies):
        v = prefix[-1]
        if v == j:
            yield Path(tuple(prefix), tuple(copies))
            return
        for w, c in sorted(G.neighbors(v).items()):
            if dist[w] == dist[v] + 1 and back[w] == d - dist[w]:
                for k in range(c):
                    prefix.append(w)
                    copies.append(k)
                    yield from extend(prefix, copies)
                    prefix.pop()
                    copies.pop()

    yield from extend([i], [])


def order_two_certificate(G: Multigraph, i: int, j: int, budget: int = DEFAULT_BUDGET):
    """A verified system of 2 paths between v_i and v_j, or None.

    Paths in a system are shortest paths, so only pairs of shortest paths are
    examined.  Raises :class:`SearchBudgetExceeded` after ``budget`` pairs.
    """
    G.require_connected()
    if i == j:
        raise ValueError("a pair needs two distinct vertices")
    paths = list(itertools.islice(shortest_paths(G, i, j), budget + 1))
    if len(paths) > budget:
        raise SearchBudgetExceeded(f"more than {budget} shortest paths")
    tried = 0
    for a, b in itertools.combinations(paths, 2):
        tried += 1
        if tried > budget:
            raise SearchBudgetExceeded(f"gave up after {budget} path pairs")
        PS = PathSystem(i, j, (a, b))
        if all(_separates(G, PS.layer(k), i, j) for k in range(1, PS.length + 1)):
            if verify_path_system(G, PS):
                return PS
    return None


def marking_from_path_system(G: Multigraph, PS: PathSystem) -> Marking:
    """Weights from a system: along the paths each edge adds the number of
    paths using it; everything off the paths takes the weight of the path
    vertex it hangs from."""
    problems = path_system_problems(G, PS)
    if problems:
        raise MarkingError("not a system of paths: " + "; ".join(problems))
    use = {}
    for p in PS.paths:
        for e in p.edges():
            use[e] = use.get(e, 0) + 1
    weight = {PS.source: 0}
    for p in PS.paths:
        s = 0
        for v, e in zip(p.vertices[1:], p.edges()):
            s += use[e]
            if weight.setdefault(v, s) != s:
                raise MarkingError(f"vertex {v} gets inconsistent weights")
    # components of G minus the path edges
    cut = {}
    for e in use:
        cut[e.endpoints] = cut.get(e.endpoints, 0) + 1
    rest = Multigraph.from_edges(
        G.n, [(a, b, c - cut.get((a, b), 0)) for a, b, c in G.edges]
    )
    S = [None] * (G.n + 1)
    for comp in rest.components():
        anchored = {weight[v] for v in comp if v in weight}
        if len(anchored) != 1:
            raise MarkingError(f"component {comp} touches path weights {sorted(anchored)}")
        w = anchored.pop()
        for v in comp:
            S[v] = w
    mk = Marking(PS.source, PS.target, PS.h, tuple(S[1:]))
    check_marking(G, mk, step="path system")
    return mk


def trails(G: Multigraph, i: int, j: int, max_length: int | None = None):
    """All v_i - v_j walks with pairwise distinct edges (copies distinguished)."""
    limit = G.m if max_length is None else max_length

    def extend(prefix, copies, used):
        v = prefix[-1]
        if v == j and copies:
            yield Path(tuple(prefix), tuple(copies))
        if len(copies) >= limit:
            return
        for w, c in sorted(G.neighbors(v).items()):
            for k in range(c):
                e = EdgeRef.of(v, w, k)
                if e in used:
                    continue
                used.add(e)
                prefix.append(w)
                copies.append(k)
                yield from extend(prefix, copies, used)
                prefix.pop()
                copies.pop()
                used.discard(e)

    yield from extend([i], [], set())


def candidate_families(G: Multigraph, i: int, j: int, h: int):
    """Every multiset of h equal-length trails from v_i to v_j."""
    by_length = {}
    for p in trails(G, i, j):
        by_length.setdefault(p.length, []).append(p)
    for group in by_length.values():
        for combo in itertools.combinations_with_replacement(group, h):
            yield PathSystem(i, j, combo)


def format_path_system(PS: PathSystem) -> str:
    """``c <path> <k> <u> <v> <copy>`` lines: edge k of path r runs u -> v."""
    out = [f"# system of {PS.h} paths from {PS.source} to {PS.target}"]
    for r, p in enumerate(PS.paths, 1):
        for k, (u, v, c) in enumerate(zip(p.vertices, p.vertices[1:], p.copies), 1):
            out.append(f"c {r} {k} {u} {v} {c}")
    return "\n".join(out) + "\n"


def parse_path_system(text: str, source: int, target: int) -> PathSystem:
    steps = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if line[0] != "c" or len(line) != 6:
            raise ValueError(f"bad certificate line {raw!r}")
        r, k, u, v, c = (int(x) for x in line[1:])
        steps.setdefault(r, {})[k] = (u, v, c)
    paths = []
    for r in sorted(steps):
        seq = [steps[r][k] for k in sorted(steps[r])]
        verts = [seq[0][0]] + [v for _, v, _ in seq]
        if any(seq[t][1] != seq[t + 1][0] for t in range(len(seq) - 1)):
            raise ValueError(f"path {r} is not contiguous")
        paths.append(Path(tuple(verts), tuple(c for _, _, c in seq)))
    return PathSystem(source, target, tuple(paths))
