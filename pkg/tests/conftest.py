import random

import pytest
from hypothesis import strategies as st

from critgroup import linalg
from critgroup.graph import Multigraph, random_connected_graph

try:
    from critgroup import _snf_c
except ImportError:
    _snf_c = None

BACKENDS = ["python"] + (["cython"] if _snf_c is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available Smith kernel."""
    monkeypatch.setattr(linalg, "_snf_c", _snf_c if request.param == "cython" else None)
    return request.param


def small_matrices(max_dim=5, bound=9, square=False):
    @st.composite
    def build(draw):
        r = draw(st.integers(1, max_dim))
        c = r if square else draw(st.integers(1, max_dim))
        entries = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
        return linalg.IntMatrix(r, c, tuple(entries))

    return build()


@st.composite
def connected_graphs(draw, n_min=2, n_max=6, max_mult=2):
    n = draw(st.integers(n_min, n_max))
    seed = draw(st.integers(0, 2**32 - 1))
    mult = draw(st.integers(1, max_mult))
    return random_connected_graph(n, random.Random(seed), p=0.5, max_mult=mult)


def graph(n, *edges):
    return Multigraph.from_edges(n, edges)
