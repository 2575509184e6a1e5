import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critgroup import collapsed as cv
from critgroup.errors import DimensionError
from critgroup.graph import (
    bundle,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    enumerate_connected,
    path_graph,
)
from critgroup.linalg import IntMatrix, basis_difference, hermite_normal_form

from conftest import connected_graphs, small_matrices


def collapsed_by_hnf(M, mu):
    """Independent check: some E_ij lies in the Hermite lattice of M - mu Id."""
    basis = hermite_normal_form(M.shift(mu))
    n = M.rows
    return any(basis.contains(basis_difference(n, i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1))


def random_positive_definite(rng, n, bound=3):
    B = IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
    return B.transpose() @ B + IntMatrix.identity(n)


def test_is_spread_examples():
    assert cv.is_spread(cycle_graph(4).laplacian())
    assert not cv.is_spread(path_graph(3).laplacian())
    assert not cv.is_spread(IntMatrix.identity(3))
    with pytest.raises(DimensionError):
        cv.is_spread(IntMatrix.from_rows([[1, 2, 3]]))


def test_witness_multiplies_back():
    M = path_graph(3).laplacian()
    w = cv.collapse_witness(M)
    assert w is not None and cv.check_witness(M, 0, w)
    assert not cv.check_witness(M, 1, w)


def test_complete_graph_three():
    rep = cv.collapsed_values(complete_graph(3).psd_laplacian())
    assert rep.collapsed == [2, 4]
    assert rep.verify()
    assert rep.spread_at(3) and not rep.spread_at(2)
    with pytest.raises(ValueError):
        rep.spread_at(rep.hi + 1)


def test_small_symmetric_matrix():
    rep = cv.collapsed_values(cv.two_by_two(1))
    assert rep.collapsed == [-2, -1, 0, 1, 2]


def test_path_five():
    assert cv.collapsed_values(path_graph(5).psd_laplacian()).collapsed == [0, 1, 2, 3]


def test_interval_arguments():
    M = complete_graph(3).psd_laplacian()
    assert cv.collapsed_values(M, 3, 4).collapsed == [4]
    with pytest.raises(ValueError):
        cv.collapsed_values(M, 5, 4)


def test_norm_bound():
    nb = cv.norm_bound(IntMatrix.from_rows([[3, 0], [0, 4]]))
    assert nb.frobenius_squared == 25 and nb.bound == 5 and nb.radius == 7
    assert cv.norm_bound(IntMatrix.from_rows([[1, 1], [1, 1]])).bound == 2
    assert abs(cv.spectral_norm_estimate(IntMatrix.from_rows([[3, 0], [0, 4]])) - 4) < 1e-6


@settings(max_examples=60, deadline=None)
@given(small_matrices(max_dim=3, bound=4, square=True))
def test_collapsed_values_match_hnf_and_norm_bound(M):
    rep = cv.collapsed_values(M)
    r = cv.norm_bound(M).radius
    assert all(abs(mu) <= r for mu in rep.collapsed)
    assert rep.verify()
    for mu in range(rep.lo, rep.hi + 1):
        assert (mu in rep.witnesses) == collapsed_by_hnf(M, mu)


def test_eigenvector_pairs():
    G = cv.many_collapsed_graph(8)
    assert cv.eigenvector_collapse_pairs(G.laplacian()) == {-9, -7, -5, -3, -1}
    equal_cols = IntMatrix.from_rows([[2, 2, 1], [5, 5, 0], [1, 1, 7]])
    assert {-1, 1} <= cv.eigenvector_collapse_pairs(equal_cols)
    assert cv.eigenvector_collapse_pairs(IntMatrix.identity(2)) == {0, 2}


def test_many_collapsed_graph():
    G = cv.many_collapsed_graph(8)
    assert [G.degree(v) for v in range(1, 9)] == [7, 7, 4, 4, 4, 4, 2, 2]
    M = G.laplacian()
    assert M == M.transpose()
    assert all(sum(M.row(r)) == 0 for r in range(M.rows))
    assert cv.is_spread(M)
    assert cv.collapsed_values(M).collapsed == sorted(cv.expected_many_collapsed(8))
    for bad in (6, 9):
        with pytest.raises(ValueError):
            cv.many_collapsed_graph(bad)


@pytest.mark.slow
def test_many_collapsed_graph_ten():
    M = cv.many_collapsed_graph(10).laplacian()
    got = cv.collapsed_values(M).collapsed
    assert got == sorted(cv.expected_many_collapsed(10))
    assert len(got) == 1 + 10 // 2


def test_double_root_family():
    fam = cv.double_root_family((3,))
    assert fam.ell == 4
    assert fam.matrix == IntMatrix.from_rows([[8, 1], [-16, 0]])
    assert fam.witnesses == {1: (1, 2, (0, 1))}
    assert cv.double_root_family((2,)).ell == 3
    assert cv.double_root_witness(3, 1) == (0, 1)

    fam = cv.double_root_family((3, 5))
    assert fam.ell == 31 and fam.expected == {26, 28}
    assert cv.double_root_witness(31, 26) == (-1, 37)
    assert cv.double_root_witness(31, 28) == (-3, 103)
    assert {26, 28} <= set(cv.collapsed_values(fam.matrix, 20, 31).collapsed)

    for bad in ((), (3, 3), (4,)):
        with pytest.raises(ValueError):
            cv.double_root_family(bad)


def test_crt():
    assert cv.crt([4, 6], [9, 25]) == (31, 225)
    with pytest.raises(ValueError):
        cv.crt([1, 1], [4, 6])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_complete_graph_scan(n):
    scan = cv.laplacian_scan(complete_graph(n))
    assert scan.collapsed == (n - 1, n + 1)
    assert scan.holds


def test_bipartite_scans():
    assert cv.laplacian_scan(cycle_graph(4)).collapsed == (1, 3)
    scan = cv.laplacian_scan(complete_bipartite(2, 3))
    assert {1, 2, 3, 4} <= set(scan.collapsed)
    assert scan.holds


def test_bipartite_two_three_also_collapses_at_five():
    # the sharp list p +- 1, q +- 1 misses mu = 5 for K_{2,3}; this witness proves it
    M = complete_bipartite(2, 3).psd_laplacian()
    witness = (1, 2, (1, 2, -1, -1, -1))
    assert M.shift(5).apply(witness[2]) == basis_difference(5, 1, 2)
    assert cv.check_witness(M, 5, witness)
    assert cv.laplacian_scan(complete_bipartite(2, 3)).collapsed == (1, 2, 3, 4, 5)


def test_scan_rejects_multigraph_unless_allowed():
    with pytest.raises(ValueError):
        cv.laplacian_scan(bundle(3))
    scan = cv.laplacian_scan(bundle(3), allow_multigraph=True)
    assert scan.holds and min(scan.collapsed) >= 0


def test_laplacians_have_no_negative_collapsed_values():
    for n in range(1, 5):
        for G in enumerate_connected(n, max_mult=2):
            rep = cv.collapsed_values(G.psd_laplacian())
            assert all(mu >= 0 for mu in rep.collapsed), G


def test_positive_definite_matrices():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(2, 4)
        A = random_positive_definite(rng, n)
        rep = cv.collapsed_values(A)
        assert all(mu >= 0 for mu in rep.collapsed)
        for mu in rep.collapsed:
            # collapsed values sit at or above lambda_min - sqrt(2)
            assert cv.smallest_eigenvalue_at_most(A, mu)


def test_minus_one_collapsed_constructions():
    equal_cols = IntMatrix.from_rows([[3, 3, 0], [1, 1, 2], [4, 4, 5]])
    assert cv.collapse_witness(equal_cols, -1) is not None
    minus_e = IntMatrix.from_rows([[0, 2, 1], [-1, 3, 0], [0, 1, 6]])  # M e_1 = -e_2
    assert cv.collapse_witness(minus_e, -1) is not None


def test_smallest_eigenvalue_at_most():
    five = IntMatrix.diagonal([5, 5])
    assert not cv.smallest_eigenvalue_at_most(five, 3)  # 5 > 3 + 1.414
    assert cv.smallest_eigenvalue_at_most(five, 4)
    # eigenvalues 1 and 3
    A = IntMatrix.from_rows([[2, 1], [1, 2]])
    assert cv.smallest_eigenvalue_at_most(A, 0)
    assert not cv.smallest_eigenvalue_at_most(A, -1)
    with pytest.raises(ValueError):
        cv.smallest_eigenvalue_at_most(IntMatrix.from_rows([[1, 2], [0, 1]]), 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20))
def test_sign_of_root_two_combination(a, b):
    value = a + b * 2 ** 0.5
    sign = cv._sign_root2(Fraction(a), Fraction(b))
    assert sign == (value > 0) - (value < 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_block_family(k):
    rep = cv.collapsed_values(cv.block_family(k), 3, 5 * k + 2)
    assert rep.collapsed == list(range(3, 5 * k + 3))
    assert rep.verify()


def test_block_family_rejects_zero():
    with pytest.raises(ValueError):
        cv.block_family(0)


@settings(max_examples=30, deadline=None)
@given(connected_graphs(n_min=2, n_max=5, max_mult=1))
def test_simple_laplacian_scan_holds(G):
    assert cv.laplacian_scan(G).holds
