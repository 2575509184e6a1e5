import random

import pytest
from hypothesis import given, settings

from critgroup.constructions import (
    MarkedGraph,
    add_edges,
    add_graph,
    coalesce,
    glue,
    reduce_to_string,
    remove_equal_weight_edges,
    string_of_bundles,
    subdivide_all,
    thicken,
    thicken_edge,
)
from critgroup.errors import MarkingError
from critgroup.graph import EdgeRef, Multigraph, bundle, complete_graph, cycle_graph, path_graph
from critgroup.group import Marking, chain_graph, critical_group, pair_order, verify_marking
from critgroup.oracles import spanning_tree_count_bruteforce

from conftest import connected_graphs, graph


def square():
    """4-cycle 1-2-4-3 marked between opposite corners: weights (0, 1, 1, 2)."""
    MG = MarkedGraph.from_pair(graph(4, (1, 2), (1, 3), (2, 4), (3, 4)), 1, 4)
    assert MG.mk.S == (0, 1, 1, 2) and MG.h == 2
    return MG


def assert_valid(MG, h):
    assert verify_marking(MG.graph, MG.mk)
    assert MG.h == h
    assert pair_order(MG.graph, MG.mk.i, MG.mk.j) == h


def test_marked_graph_rejects_bad_certificate():
    with pytest.raises(MarkingError):
        MarkedGraph(cycle_graph(4), Marking(1, 3, 2, (0, 1, 1, 1)))


def test_add_graph():
    G2 = MarkedGraph.from_pair(bundle(2), 1, 2)
    out = add_graph(G2, complete_graph(3), attach=2)
    assert out.graph.n == 4
    assert out.mk.S[2:] == (G2.weight(2),) * 2
    assert_valid(out, 2)

    C3 = MarkedGraph.from_pair(cycle_graph(3), 1, 3)
    assert_valid(add_graph(C3, path_graph(2), attach=2), 3)

    same = add_graph(C3, Multigraph(1, ()), attach=2)
    assert same.graph == C3.graph and same.mk == C3.mk

    with pytest.raises(MarkingError):
        add_graph(C3, path_graph(2), attach=9)


def test_glue():
    MG = square()
    out = glue(MG, 2, 3)
    assert out.graph.edges == ((1, 2, 2), (2, 3, 2))
    assert out.mk.S == (0, 1, 2)
    assert_valid(out, 2)

    with pytest.raises(MarkingError):
        glue(MG, 1, 2)  # marked vertex
    C5 = MarkedGraph.from_pair(cycle_graph(5), 1, 5)
    with pytest.raises(MarkingError):
        glue(C5, 2, 3)  # different weights

    leaves = add_graph(add_graph(MG, path_graph(2), 2), path_graph(2), 2)
    merged = glue(leaves, 5, 6)
    assert merged.graph.n == 5
    assert_valid(merged, 2)


def test_thicken_cycle_edge():
    C3 = MarkedGraph.from_pair(cycle_graph(3), 1, 3)
    out = thicken(C3, 1, 3)
    assert spanning_tree_count_bruteforce(out.graph) == 12 == critical_group(out.graph).order
    assert out.mk.S == (0, 1, 2, 1)
    assert_valid(out, 3)


def test_thicken_double_edge():
    # 1 =2= 3 with a detour 1 - 2 - 3; pair (1, 3) has weights (0, 1, 2)
    G = graph(3, (1, 2), (2, 3), (1, 3, 2))
    MG = MarkedGraph.from_pair(G, 1, 3)
    s = MG.weight(3) - MG.weight(1)
    assert s == 2
    out = thicken(MG, 3, 1)
    assert out.graph.mult(1, 4) == out.graph.mult(3, 4) == 2 * s
    want = s * (2 * s) ** (s - 1) * critical_group(G).order
    assert critical_group(out.graph).order == want == spanning_tree_count_bruteforce(out.graph)
    assert_valid(out, MG.h)


def test_thicken_rejects_small_gaps():
    MG = square()
    with pytest.raises(MarkingError):
        thicken(MG, 1, 2)
    flat = add_edges(MG, 2, 3)
    with pytest.raises(MarkingError):
        thicken(flat, 2, 3)
    with pytest.raises(MarkingError):
        thicken_edge(cycle_graph(4), 1, 3, 2)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_thickened_cycle_pair(n):
    s = n - 1
    T = thicken_edge(cycle_graph(n), 1, n, s)
    w1 = n + 1
    assert pair_order(T, 1, w1) == n * s * s
    mk = MarkedGraph.from_pair(T, 1, w1).mk
    for r in range(1, s):
        assert mk.weight(n + r) == s * r + n * (s - r)


def test_remove_equal_weight_edges():
    MG = add_edges(square(), 2, 3)
    out = remove_equal_weight_edges(MG, [(2, 3)])
    assert out.graph == square().graph
    assert_valid(out, 2)

    assert remove_equal_weight_edges(MG, []) == MG

    with pytest.raises(MarkingError):
        remove_equal_weight_edges(MG, [(1, 2)])


def test_remove_drops_far_component():
    # weight-1 vertex 2 hangs a leaf 5 off the square; cutting 2-5 leaves 5 behind
    MG = add_graph(square(), path_graph(2), attach=2)
    out = remove_equal_weight_edges(MG, [EdgeRef(2, 5, 0)])
    assert out.graph.n == 4
    assert_valid(out, 2)
    with pytest.raises(MarkingError):
        remove_equal_weight_edges(MG, [EdgeRef(2, 5, 1)])


def test_add_edges():
    MG = square()
    out = add_edges(MG, 2, 3, 1)
    assert out.graph.mult(2, 3) == 1
    assert_valid(out, 2)
    assert add_edges(MG, 2, 3, 0).graph == MG.graph
    with pytest.raises(MarkingError):
        add_edges(MG, 1, 2)


def test_add_edges_is_add_graph_then_glue():
    MG = square()
    c = 3
    via = add_graph(MG, bundle(c), attach=2)
    via = glue(via, 3, 5)
    assert via.graph == add_edges(MG, 2, 3, c).graph


def test_subdivide():
    K2 = MarkedGraph.from_pair(path_graph(2), 1, 2)
    P4 = subdivide_all(K2, 3)
    assert P4.graph.n == 4 and P4.graph.m == 3
    assert_valid(P4, 1)

    C3 = MarkedGraph.from_pair(cycle_graph(3), 1, 3)
    C6 = subdivide_all(C3, 2)
    assert C6.graph.n == 6 and C6.mk.S[:3] == (0, 2, 4)
    assert_valid(C6, 3)

    with pytest.raises(MarkingError):
        subdivide_all(MarkedGraph.from_pair(bundle(2), 1, 2), 2)


@pytest.mark.parametrize("h,ell", [(2, 3), (3, 2), (4, 4)])
def test_subdivided_bundle_is_parallel_chains(h, ell):
    # h chains of length ell between two vertices, built by subdivision
    Gh = MarkedGraph.from_pair(bundle(h), 1, 2)
    with pytest.raises(MarkingError):
        subdivide_all(Gh, ell)
    cg = chain_graph(*([ell] * h))
    MG = MarkedGraph.from_pair(cg.graph, cg.v, cg.w)
    assert MG.h == h and MG.mk.length == ell
    for d in range(1, h + 1):
        assert [MG.weight(cg.vertex(k, d)) for k in range(ell + 1)] == list(range(ell + 1))


def test_coalesce():
    G2 = MarkedGraph.from_pair(bundle(2), 1, 2)
    G3 = MarkedGraph.from_pair(bundle(3), 1, 2)
    out = coalesce(G2, G3)
    assert out.graph.n == 3
    assert_valid(out, 6)

    for h in (2, 3, 5):
        Gh = MarkedGraph.from_pair(bundle(h), 1, 2)
        assert_valid(coalesce(Gh, Gh), h)

    K2 = MarkedGraph.from_pair(path_graph(2), 1, 2)
    C5 = MarkedGraph.from_pair(cycle_graph(5), 1, 5)
    assert_valid(coalesce(C5, K2), 5)
    assert_valid(coalesce(K2, C5), 5)


def test_reduce_cycle():
    C5 = MarkedGraph.from_pair(cycle_graph(5), 1, 5)
    dec = reduce_to_string(C5)
    assert (dec.h, dec.length) == (5, 4)
    assert sorted(dec.result.graph.edges) == sorted(string_of_bundles(5, 4).edges)
    for _, step in dec.steps:
        assert verify_marking(step.graph, step.mk)


def test_reduce_bundle_is_fixed_point():
    G4 = MarkedGraph.from_pair(bundle(4), 1, 2)
    dec = reduce_to_string(G4)
    assert (dec.h, dec.length) == (4, 1)
    assert dec.result.graph == G4.graph


def test_reduce_chain_graph():
    cg = chain_graph(1, 2, 3)
    MG = MarkedGraph.from_pair(cg.graph, cg.v, cg.w)
    dec = reduce_to_string(MG)
    assert dec.h == 11
    assert dec.length == MG.mk.length
    assert all(c == 11 for _, _, c in dec.result.graph.edges)


def by_weight(MG):
    # labels of appended vertices depend on the thickening order; weights do not
    return sorted((MG.weight(a), MG.weight(b), c) for a, b, c in MG.graph.edges)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(n_min=2, n_max=5, max_mult=2))
def test_reduction_independent_of_thickening_order(G):
    MG = MarkedGraph.from_pair(G, 1, G.n)
    base = reduce_to_string(MG)
    for seed in range(3):
        dec = reduce_to_string(MG, rng=random.Random(seed))
        assert (dec.h, dec.length) == (base.h, base.length)
        assert by_weight(dec.result) == by_weight(base.result)

