"""Marking-preserving graph operations and the reduction to a string of G_h.

Every operation takes a :class:`MarkedGraph` and returns a new one whose
marking is re-verified on construction, so an operation that breaks the
certificate fails loudly instead of returning a bad object.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import InvariantError, MarkingError
from .graph import EdgeRef, Multigraph
from .group import Marking, check_marking, marking


@dataclass(frozen=True)
class MarkedGraph:
    graph: Multigraph
    mk: Marking

    def __post_init__(self):
        check_marking(self.graph, self.mk)

    @classmethod
    def from_pair(cls, G: Multigraph, i: int, j: int) -> "MarkedGraph":
        return cls(G, marking(G, i, j))

    @property
    def h(self) -> int:
        return self.mk.h

    def weight(self, v: int) -> int:
        return self.mk.S[v - 1]


def _rebuild(n, edges, weights, i, j, h) -> MarkedGraph:
    G = Multigraph.from_edges(n, edges)
    return MarkedGraph(G, Marking(i, j, h, tuple(weights)).normalized())


def add_graph(MG: MarkedGraph, H: Multigraph, attach: int, at: int = 1) -> MarkedGraph:
    """Glue H onto MG by identifying H's vertex ``at`` with MG's ``attach``.

    H's other vertices are appended (in order) and inherit ``attach``'s weight.
    """
    G = MG.graph
    if not 1 <= attach <= G.n:
        raise MarkingError(f"attach vertex {attach} not in 1..{G.n}")
    if not 1 <= at <= H.n:
        raise MarkingError(f"vertex {at} not in H")
    H.require_connected()
    new_id = {at: attach}
    for u in range(1, H.n + 1):
        if u != at:
            new_id[u] = G.n + len(new_id)
    edges = list(G.edges) + [(new_id[a], new_id[b], c) for a, b, c in H.edges]
    weights = list(MG.mk.S) + [MG.weight(attach)] * (H.n - 1)
    return _rebuild(G.n + H.n - 1, edges, weights, MG.mk.i, MG.mk.j, MG.h)


def _merge(MG: MarkedGraph, keep: int, drop: int) -> MarkedGraph:
    G = MG.graph
    index = {}
    for v in range(1, G.n + 1):
        if v != drop:
            index[v] = len(index) + 1
    index[drop] = index[keep]
    edges = [(index[a], index[b], c) for a, b, c in G.edges]
    weights = [MG.weight(v) for v in range(1, G.n + 1) if v != drop]
    return _rebuild(G.n - 1, edges, weights, index[MG.mk.i], index[MG.mk.j], MG.h)


def glue(MG: MarkedGraph, a: int, b: int) -> MarkedGraph:
    """Identify two non-adjacent, unmarked vertices of equal weight.

    The merged vertex keeps the smaller index; higher indices shift down.
    """
    G = MG.graph
    if a == b:
        raise MarkingError("cannot glue a vertex to itself")
    for v in (a, b):
        if not 1 <= v <= G.n:
            raise MarkingError(f"vertex {v} not in 1..{G.n}")
    if {a, b} & {MG.mk.i, MG.mk.j}:
        raise MarkingError("glued vertices must differ from the marked pair")
    if MG.weight(a) != MG.weight(b):
        raise MarkingError(f"weights differ: s_{a}={MG.weight(a)}, s_{b}={MG.weight(b)}")
    if G.mult(a, b):
        raise MarkingError(f"vertices {a} and {b} are adjacent")
    return _merge(MG, min(a, b), max(a, b))


def thicken_edge(G: Multigraph, low: int, high: int, gap: int) -> Multigraph:
    """Replace the e edges between ``low`` and ``high`` by a chain of gap - 1
    new vertices (appended as n+1, ...) whose links carry ``e * gap`` edges."""
    e = G.mult(low, high)
    if e < 1:
        raise MarkingError(f"no edge between {low} and {high}")
    if gap < 2:
        raise MarkingError(f"gap {gap} leaves nothing to thicken")
    walk = [low] + list(range(G.n + 1, G.n + gap)) + [high]
    edges = [(a, b, c) for a, b, c in G.edges if {a, b} != {low, high}]
    edges += [(a, b, e * gap) for a, b in zip(walk, walk[1:])]
    return Multigraph.from_edges(G.n + gap - 1, edges)


def thicken(MG: MarkedGraph, v: int, v2: int) -> MarkedGraph:
    """Thicken the bundle between v and v2 along the marking.

    With weight gap s = |s_v - s_v2| >= 2, the s - 1 new vertices get the
    intermediate weights and consecutive chain links carry e*s edges.
    """
    if MG.graph.mult(v, v2) < 1:
        raise MarkingError(f"no edge between {v} and {v2}")
    if MG.weight(v) < MG.weight(v2):
        v, v2 = v2, v
    gap = MG.weight(v) - MG.weight(v2)
    if gap == 0:
        raise MarkingError("equal weights: nothing to thicken")
    if gap == 1:
        raise MarkingError("weights differ by 1: thickening would be a no-op")
    G = thicken_edge(MG.graph, v2, v, gap)
    low = MG.weight(v2)
    weights = list(MG.mk.S) + [low + r for r in range(1, gap)]
    return MarkedGraph(G, Marking(MG.mk.i, MG.mk.j, MG.h, tuple(weights)).normalized())


def remove_equal_weight_edges(MG: MarkedGraph, edges) -> MarkedGraph:
    """Delete edges joining equal-weight vertices and keep the marked component.

    Items are :class:`EdgeRef` (one copy) or ``(i, j)`` pairs (whole bundle).
    """
    G = MG.graph
    mult = {(a, b): c for a, b, c in G.edges}
    copies_seen = set()
    for item in edges:
        if isinstance(item, EdgeRef):
            key, count = item.endpoints, 1
            if item in copies_seen or item.copy >= G.mult(*key):
                raise MarkingError(f"no such edge copy {item}")
            copies_seen.add(item)
        else:
            a, b = item
            key, count = (min(a, b), max(a, b)), None
        if key not in mult:
            raise MarkingError(f"no edges between {key[0]} and {key[1]}")
        if MG.weight(key[0]) != MG.weight(key[1]):
            raise MarkingError(f"edge {key} joins vertices of different weight")
        mult[key] = 0 if count is None else mult[key] - count
    H = Multigraph.from_edges(G.n, [(a, b, c) for (a, b), c in mult.items()])
    comp = next(c for c in H.components() if MG.mk.i in c)
    if MG.mk.j not in comp:
        raise InvariantError("marked vertices ended in different components")
    sub, index = H.induced(comp)
    weights = [MG.weight(v) for v in comp]
    return MarkedGraph(sub, Marking(index[MG.mk.i], index[MG.mk.j], MG.h, tuple(weights)).normalized())


def add_edges(MG: MarkedGraph, k: int, l: int, c: int = 1) -> MarkedGraph:
    """Add c parallel edges between two equal-weight vertices."""
    G = MG.graph
    if k == l:
        raise MarkingError("edges need two distinct endpoints")
    if c < 0:
        raise MarkingError("negative edge count")
    if MG.weight(k) != MG.weight(l):
        raise MarkingError(f"weights differ: s_{k}={MG.weight(k)}, s_{l}={MG.weight(l)}")
    return _rebuild(G.n, list(G.edges) + [(k, l, c)], MG.mk.S, MG.mk.i, MG.mk.j, MG.h)


def subdivide_all(MG: MarkedGraph, b: int) -> MarkedGraph:
    """Replace every edge of a simple graph by a path of b edges.

    Old weights are multiplied by b; the r-th new vertex on the edge (k, l),
    counted from k with ``k < l``, gets ``b*s_k + (s_l - s_k)*r``.
    """
    G = MG.graph
    if b < 1:
        raise MarkingError("subdivision factor must be >= 1")
    if not G.is_simple:
        raise MarkingError("subdivision needs a simple graph")
    weights = [b * s for s in MG.mk.S]
    edges = []
    nxt = G.n + 1
    for k, l, _ in G.edges:
        sk, sl = MG.weight(k), MG.weight(l)
        walk = [k]
        for r in range(1, b):
            walk.append(nxt)
            weights.append(b * sk + (sl - sk) * r)
            nxt += 1
        walk.append(l)
        edges += list(zip(walk, walk[1:]))
    return _rebuild(nxt - 1, edges, weights, MG.mk.i, MG.mk.j, MG.h)


def coalesce(MG: MarkedGraph, MG2: MarkedGraph) -> MarkedGraph:
    """Glue MG's lowest marked vertex to MG2's highest; order becomes lcm(h, h2).

    MG2's vertices other than the glue vertex are appended in order.  The new
    marked pair is (MG2's low vertex, MG's high vertex).
    """
    G, G2 = MG.graph, MG2.graph
    h, h2 = MG.h, MG2.h
    g = math.gcd(h, h2)
    base = MG.weight(MG.mk.i)
    top = MG2.weight(MG2.mk.j)
    # normalise: first graph >= 0 with 0 at the glue vertex,
    # second graph <= 0 with 0 at its glue vertex
    S1 = [s - base for s in MG.mk.S]
    S2 = [s - top for s in MG2.mk.S]
    if min(S1) < 0 or max(S2) > 0:
        raise InvariantError("coalesce normalisation failed")
    glue_at = MG2.mk.j
    new_id = {glue_at: MG.mk.i}
    for u in range(1, G2.n + 1):
        if u != glue_at:
            new_id[u] = G.n + len(new_id)
    edges = list(G.edges) + [(new_id[a], new_id[b], c) for a, b, c in G2.edges]
    weights = [h2 * s // g for s in S1]
    weights += [h * S2[u - 1] // g for u in range(1, G2.n + 1) if u != glue_at]
    lcm = h * h2 // g
    return _rebuild(G.n + G2.n - 1, edges, weights, new_id[MG2.mk.i], MG.mk.j, lcm)


# -- reduction to a string of G_h -------------------------------------------


@dataclass(frozen=True)
class StringDecomposition:
    """Result of reducing a marked graph: a path of ``length`` bundles of h edges."""

    h: int
    length: int
    result: MarkedGraph
    steps: tuple = field(default=(), repr=False)

    @property
    def endpoints(self) -> tuple:
        return (self.result.mk.i, self.result.mk.j)


def _glue_weight_classes(MG: MarkedGraph) -> MarkedGraph:
    while True:
        classes = {}
        for v in range(1, MG.graph.n + 1):
            classes.setdefault(MG.weight(v), []).append(v)
        todo = [vs for _, vs in sorted(classes.items()) if len(vs) > 1]
        if not todo:
            return MG
        a, b = todo[0][:2]
        MG = glue(MG, a, b)


def reduce_to_string(MG: MarkedGraph, rng: random.Random | None = None) -> StringDecomposition:
    """Remove same-weight edges, glue, thicken, glue: the result is a string of G_h.

    ``rng`` shuffles the order in which qualifying edges are thickened (the
    default is lexicographic); the final string must not depend on it.
    """
    h = MG.h
    expected_length = MG.mk.length
    if expected_length <= 0:
        raise MarkingError("reduction needs s_i < s_j")
    steps = [("input", MG)]

    def run(step, fn):
        nonlocal MG
        try:
            MG = fn(MG)
        except MarkingError as exc:
            raise InvariantError(str(exc), step=step) from exc
        if MG.h != h:
            raise InvariantError(f"order changed from {h} to {MG.h}", step=step)
        steps.append((f"step {step}", MG))

    def drop_flat_edges(mg):
        flat = [(a, b) for a, b, _ in mg.graph.edges if mg.weight(a) == mg.weight(b)]
        return remove_equal_weight_edges(mg, flat)

    def thicken_steep_edges(mg):
        steep = [(a, b) for a, b, _ in mg.graph.edges if abs(mg.weight(a) - mg.weight(b)) >= 2]
        if rng is not None:
            rng.shuffle(steep)
        for a, b in steep:
            # thickening only appends vertices, so old labels stay valid
            mg = thicken(mg, a, b)
        return mg

    run(1, drop_flat_edges)
    run(2, _glue_weight_classes)
    run(3, thicken_steep_edges)
    run(4, _glue_weight_classes)

    G = MG.graph
    weights = sorted(MG.mk.S)
    if weights != list(range(expected_length + 1)):
        raise InvariantError(f"weights {weights} are not 0..{expected_length}", step=4)
    by_weight = {MG.weight(v): v for v in range(1, G.n + 1)}
    want = sorted(
        (min(by_weight[k], by_weight[k + 1]), max(by_weight[k], by_weight[k + 1]), h)
        for k in range(expected_length)
    )
    if sorted(G.edges) != want:
        raise InvariantError("result is not a string of G_h", step=4)
    return StringDecomposition(h, expected_length, MG, tuple(steps))


def string_of_bundles(h: int, length: int) -> Multigraph:
    """Path on ``length + 1`` vertices with h parallel edges per link."""
    return Multigraph.from_edges(length + 1, [(k, k + 1, h) for k in range(1, length + 1)])
