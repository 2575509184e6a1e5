import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from critgroup.errors import DisconnectedGraphError, MarkingError, ParseError
from critgroup.graph import bundle, complete_graph, cycle_graph, enumerate_connected, path_graph
from critgroup.group import (
    GroupStructure,
    Marking,
    chain_graph,
    chain_pair_order_formula,
    critical_group,
    format_marked,
    marking,
    marking_from_weights,
    marking_problems,
    pair_order,
    pair_orders,
    pairing_self,
    parse_marked,
    verify_marking,
)
from critgroup.oracles import pair_order_bruteforce

from conftest import connected_graphs, graph


def test_critical_group_examples(backend):
    assert critical_group(cycle_graph(7)).torsion_factors == (7,)
    assert critical_group(complete_graph(4)).torsion_factors == (4, 4)
    assert critical_group(chain_graph(1, 2, 3).graph).torsion_factors == (11,)
    assert critical_group(path_graph(4)).torsion_factors == ()
    with pytest.raises(DisconnectedGraphError):
        critical_group(graph(4, (1, 2), (3, 4)))


def test_group_structure():
    g = GroupStructure((2, 6), 1)
    assert g.order == 12 and g.exponent == 6 and g.rank == 2 and not g.is_cyclic
    assert str(g) == "Z/2 x Z/6 x Z"
    assert str(GroupStructure(())) == "0"
    assert GroupStructure(()).exponent == 1


def test_free_rank_is_one():
    for G in enumerate_connected(4, max_mult=2):
        assert critical_group(G).free_rank == 1


def test_pair_order_examples(backend):
    assert pair_order(cycle_graph(5), 1, 5) == 5
    assert pair_order(bundle(7), 1, 2) == 7
    cg = chain_graph(2, 3, 4)
    assert pair_order(cg.graph, cg.v, cg.w) == 13
    assert pair_order_bruteforce(cg.graph, cg.v, cg.w) == 13
    with pytest.raises(ValueError):
        pair_order(cycle_graph(5), 2, 2)


def test_pair_orders_symmetric_and_match_oracle():
    for G in enumerate_connected(4):
        po = pair_orders(G)
        for (i, j), h in po.items():
            assert pair_order(G, j, i) == h
            assert pair_order_bruteforce(G, i, j) == h


def test_marking_examples(backend):
    assert marking(cycle_graph(4), 1, 4) == Marking(1, 4, 4, (0, 1, 2, 3))
    assert marking(bundle(3), 1, 2) == Marking(1, 2, 3, (0, 1))
    assert marking(path_graph(2), 1, 2) == Marking(1, 2, 1, (0, 1))


def test_verify_marking_examples():
    C4 = cycle_graph(4)
    assert verify_marking(C4, Marking(1, 4, 4, (0, 1, 2, 3)))
    bad = Marking(1, 4, 8, (0, 2, 4, 6))
    assert not verify_marking(C4, bad)
    assert "weight differences are not coprime" in marking_problems(C4, bad)
    assert verify_marking(bundle(2), Marking(1, 2, 2, (0, 1)))
    # wrong orientation: s_i must be the minimum
    assert not verify_marking(C4, Marking(4, 1, 4, (0, 1, 2, 3)))
    assert marking_problems(C4, Marking(1, 4, 4, (0, 1))) != []


@settings(max_examples=80, deadline=None)
@given(connected_graphs())
def test_markings_are_valid_and_minimal(G):
    for (i, j), h in pair_orders(G).items():
        mk = marking(G, i, j)
        assert mk.h == h
        assert min(mk.S) == 0 == mk.weight(i)
        assert max(mk.S) == mk.weight(j)
        assert verify_marking(G, mk)


def test_pairing_examples():
    cg = chain_graph(1, 2, 3)
    assert pairing_self(cg.graph, cg.v, cg.w) == Fraction(5, 11)
    for h in (2, 3, 5):
        assert pairing_self(bundle(h), 1, 2) == Fraction(h - 1, h)
    assert pairing_self(path_graph(2), 1, 2) == 0


def compositions(total):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


def test_chain_graph_shape():
    cg = chain_graph(1, 2, 3)
    # 2 + (1-1) + (2-1) + (3-1) vertices, one edge per unit of chain length
    assert (cg.graph.n, cg.graph.m) == (5, 6)
    assert chain_graph(1, 2, 3, 4, 5).graph.n == 12
    ex = chain_graph(*([3] * 4))
    assert pair_order(ex.graph, ex.v, ex.w) == 4
    with pytest.raises(ValueError):
        chain_graph(2, 0)


def test_chain_formulas_examples():
    assert chain_pair_order_formula((1, 2, 3)) == 11
    assert chain_pair_order_formula((2, 3, 4), 1) == 26
    assert chain_pair_order_formula((1, 2, 3), 2) == 11
    assert chain_pair_order_formula((1, 2, 3, 4, 5)) == 137
    with pytest.raises(ValueError):
        chain_pair_order_formula((1, 2, 3), 3)


def test_chain_formulas_sweep():
    for total in range(1, 11):
        for t in compositions(total):
            cg = chain_graph(*t)
            po = pair_orders(cg.graph)

            def order(a, b):
                return po[(min(a, b), max(a, b))]

            assert chain_pair_order_formula(t) == order(cg.v, cg.w), t
            for k in range(1, t[-1]):
                assert chain_pair_order_formula(t, k) == order(cg.v, cg.vertex(k, len(t))), (t, k)


def test_coprime_chain_shorthand():
    # chains (1, x, y) with gcd(x, y) = 1 give order x + y + xy
    for x, y in itertools.product(range(1, 7), repeat=2):
        if x != y and __import__("math").gcd(x, y) == 1:
            assert chain_pair_order_formula((1, x, y)) == x + y + x * y


def test_generator_bounds_simple():
    for n in range(2, 6):
        for G in enumerate_connected(n):
            r = critical_group(G).rank
            assert r <= G.cycle_rank
            assert r <= G.n - 1 - G.diameter


def test_diameter_bound_needs_simple_graphs():
    # G_2 has one nontrivial factor but n - 1 - diam = 0
    G = bundle(2)
    assert critical_group(G).rank == 1 > G.n - 1 - G.diameter
    for G in enumerate_connected(4, max_mult=3):
        assert critical_group(G).rank <= G.cycle_rank


def test_marked_text_roundtrip():
    G = cycle_graph(5)
    mk = marking(G, 1, 3)
    G2, mk2 = parse_marked(format_marked(G, mk))
    assert (G2, mk2) == (G, mk)
    assert marking_from_weights(G, mk.S) == mk
    with pytest.raises(ParseError):
        parse_marked("n 2\ne 1 2\n")
    with pytest.raises(MarkingError):
        marking_from_weights(G, (0, 0, 0, 0, 1))
