import pytest
from hypothesis import given, settings

from critgroup.errors import MarkingError, SearchBudgetExceeded
from critgroup.graph import bundle, cycle_graph, path_graph
from critgroup.group import chain_graph, pair_order, pair_orders, verify_marking
from critgroup.paths import (
    Path,
    PathSystem,
    candidate_families,
    format_path_system,
    marking_from_path_system,
    order_one_pair,
    order_two_certificate,
    parse_path_system,
    path_system_problems,
    shortest_paths,
    spread_check,
    trails,
    verify_path_system,
)

from conftest import connected_graphs, graph

SQUARE = graph(4, (1, 2), (1, 3), (2, 4), (3, 4))


def arcs():
    return PathSystem(1, 4, (Path((1, 2, 4)), Path((1, 3, 4))))


def test_square_two_arcs():
    PS = arcs()
    assert PS.h == 2 and PS.length == 2
    assert verify_path_system(SQUARE, PS)
    mk = marking_from_path_system(SQUARE, PS)
    assert mk.S == (0, 1, 1, 2) and mk.h == 2


def test_parallel_chains_system():
    for lengths in ((3, 3), (2, 2, 2), (4, 4, 4, 4)):
        cg = chain_graph(*lengths)
        paths = tuple(
            Path(tuple(cg.vertex(k, d) for k in range(lengths[0] + 1))) for d in range(1, len(lengths) + 1)
        )
        PS = PathSystem(cg.v, cg.w, paths)
        assert verify_path_system(cg.graph, PS)
        mk = marking_from_path_system(cg.graph, PS)
        assert mk.h == len(lengths) == pair_order(cg.graph, cg.v, cg.w)
        for p in paths:
            assert [mk.weight(v) for v in p.vertices] == list(range(lengths[0] + 1))


def test_bundle_certificate():
    PS = order_two_certificate(bundle(2), 1, 2)
    assert PS is not None and PS.length == 1
    assert sorted(p.copies for p in PS.paths) == [(0,), (1,)]
    assert marking_from_path_system(bundle(2), PS).S == (0, 1)


def test_square_certificate():
    PS = order_two_certificate(SQUARE, 1, 4)
    assert PS is not None
    assert {p.vertices for p in PS.paths} == {(1, 2, 4), (1, 3, 4)}


def test_overlapping_certificate():
    # pendant edge 4-5 is shared by both paths and advances the weight by 2
    G = graph(5, (1, 2), (1, 3), (2, 4), (3, 4), (4, 5))
    assert pair_order(G, 1, 5) == 2
    PS = order_two_certificate(G, 1, 5)
    assert PS is not None
    mk = marking_from_path_system(G, PS)
    assert mk.S == (0, 1, 1, 2, 4)
    assert verify_marking(G, mk)


def test_no_certificate_on_five_cycle():
    C5 = cycle_graph(5)
    for i in range(1, 6):
        for j in range(i + 1, 6):
            assert order_two_certificate(C5, i, j) is None


def test_certificate_budget():
    with pytest.raises(SearchBudgetExceeded):
        order_two_certificate(chain_graph(4, 4, 4, 4, 4).graph, 1, 2, budget=3)


def test_unequal_lengths_rejected():
    PS = PathSystem(1, 3, (Path((1, 3)), Path((1, 2, 3))))
    assert not verify_path_system(cycle_graph(3), PS)
    assert any("different lengths" in p for p in path_system_problems(cycle_graph(3), PS))


def test_non_shortest_system_rejected():
    PS = PathSystem(1, 4, (Path((1, 2, 3, 4)),))
    problems = path_system_problems(cycle_graph(4), PS)
    assert problems


def test_malformed_paths_raise():
    with pytest.raises(ValueError):
        verify_path_system(SQUARE, PathSystem(1, 4, (Path((2, 4)),)))
    with pytest.raises(ValueError):
        verify_path_system(SQUARE, PathSystem(1, 4, (Path((1, 4)),)))
    with pytest.raises(ValueError):
        verify_path_system(SQUARE, PathSystem(1, 4, (Path((1, 2, 4), (0, 1)),)))
    with pytest.raises(ValueError):
        Path((1, 2, 3), (0,))
    with pytest.raises(MarkingError):
        marking_from_path_system(cycle_graph(3), PathSystem(1, 3, (Path((1, 3)), Path((1, 2, 3)))))


def test_order_one_pair_examples():
    P5 = path_graph(5)
    assert all(order_one_pair(P5, i, j) for i in range(1, 6) for j in range(1, 6) if i != j)
    C6 = cycle_graph(6)
    assert not any(order_one_pair(C6, 1, j) for j in range(2, 7))
    theta = chain_graph(2, 3, 3).graph
    n = theta.n
    assert not any(order_one_pair(theta, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
    lollipop = graph(4, (1, 2), (1, 3), (2, 3), (3, 4))
    assert order_one_pair(lollipop, 3, 4) and not order_one_pair(lollipop, 1, 4)


def test_spread_check_examples():
    assert spread_check(cycle_graph(3))
    assert not spread_check(path_graph(4))
    assert not spread_check(graph(4, (1, 2), (1, 3), (1, 4)))
    bowtie = graph(5, (1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5))
    assert spread_check(bowtie)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(n_min=2, n_max=6, max_mult=2))
def test_low_orders_match_algebra(G):
    orders = pair_orders(G)
    for (i, j), h in orders.items():
        assert order_one_pair(G, i, j) == (h == 1)
    assert spread_check(G) == all(h != 1 for h in orders.values())


@settings(max_examples=40, deadline=None)
@given(connected_graphs(n_min=2, n_max=5, max_mult=2))
def test_order_two_matches_algebra(G):
    for (i, j), h in pair_orders(G).items():
        PS = order_two_certificate(G, i, j)
        assert (PS is not None) == (h == 2)
        if PS is not None:
            assert marking_from_path_system(G, PS).h == 2


@pytest.mark.parametrize("h", [3, 4])
def test_cycles_have_no_h_path_system(h):
    C = cycle_graph(h)
    assert pair_order(C, 1, h) == h
    families = list(candidate_families(C, 1, h, h))
    assert families
    assert not any(verify_path_system(C, F) for F in families)


def test_trails_and_shortest_paths():
    assert sorted(p.vertices for p in trails(cycle_graph(4), 1, 3)) == [(1, 2, 3), (1, 4, 3)]
    # trails may revisit vertices: 3 single edges plus 3! orders of all three
    lengths = sorted(p.length for p in trails(bundle(3), 1, 2))
    assert lengths == [1] * 3 + [3] * 6
    assert sorted(p.vertices for p in shortest_paths(SQUARE, 1, 4)) == [(1, 2, 4), (1, 3, 4)]


def test_certificate_text_round_trip():
    PS = order_two_certificate(graph(3, (1, 2, 2), (2, 3, 2)), 1, 3)
    text = format_path_system(PS)
    assert text.startswith("# system of 2 paths")
    assert parse_path_system(text, 1, 3) == PS
    with pytest.raises(ValueError):
        parse_path_system("c 1 1 1 2\n", 1, 2)
    with pytest.raises(ValueError):
        parse_path_system("c 1 1 1 2 0\nc 1 2 3 4 0\n", 1, 4)
