import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bookramsey.graph import (
    Color,
    ColoredCompleteGraph,
    GraphError,
    book_size,
    book_size_k,
    codegree,
    codegree_matrix,
    common_neighbours,
    is_clique,
    pair_density,
    turan_independence_floor,
)
from conftest import random_graph
from oracles import dense, naive_book, naive_book_k


@st.composite
def graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    red = np.zeros((n, n), dtype=bool)
    red[np.triu_indices(n, 1)] = bits
    return ColoredCompleteGraph(red | red.T)


def pentagon():
    return ColoredCompleteGraph.from_red_relation(5, [(i, (i + 1) % 5) for i in range(5)])


def test_rejects_bad_matrices():
    with pytest.raises(GraphError):
        ColoredCompleteGraph(np.ones((3, 3), dtype=bool))
    with pytest.raises(GraphError):
        ColoredCompleteGraph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(GraphError):
        ColoredCompleteGraph(np.zeros((2, 3)))
    with pytest.raises(GraphError):
        ColoredCompleteGraph.from_red_relation(3, [(1, 1)])
    with pytest.raises(GraphError):
        ColoredCompleteGraph.from_red_relation(3, [(0, 3)])


def test_codegree_pentagon():
    g = pentagon()
    assert codegree(g, 0, 1, Color.RED) == 0
    assert codegree(g, 0, 2, Color.RED) == 1
    assert codegree(g, 0, 2, Color.BLUE) == 0
    with pytest.raises(GraphError):
        codegree(g, 2, 2, Color.RED)
    with pytest.raises(GraphError):
        codegree(g, 0, 9, Color.RED)


def test_pentagon_books():
    g = pentagon()
    assert book_size(g, Color.RED).pages == 0
    assert book_size(g, Color.BLUE).pages == 0
    assert book_size(g, Color.RED).has_base


def test_no_base_sentinel():
    g = ColoredCompleteGraph(np.zeros((6, 6), dtype=bool))
    red = book_size(g, Color.RED)
    assert red.pages == 0 and red.base == () and not red.has_base
    assert book_size(g, Color.BLUE).pages == 4
    tri = book_size_k(g, Color.RED, 3)
    assert tri.pages == 0 and not tri.has_base
    assert book_size_k(g, Color.BLUE, 4).pages == 2


def test_book_size_k_range():
    g = pentagon()
    with pytest.raises(GraphError):
        book_size_k(g, Color.RED, 1)
    with pytest.raises(GraphError):
        book_size_k(g, Color.RED, 5)


@given(graphs())
def test_book_size_matches_naive(g):
    for color in Color:
        b = book_size(g, color)
        want = naive_book(dense(g, color))
        assert b.pages == max(want, 0)
        if b.has_base:
            u, v = b.base
            assert g.adjacency(color)[u, v]
            assert codegree(g, u, v, color) == b.pages


@given(graphs(max_n=10), st.integers(2, 4))
def test_book_size_k_matches_naive(g, k):
    for color in Color:
        b = book_size_k(g, color, k)
        assert b.pages == max(naive_book_k(dense(g, color), k), 0)
        if b.has_base:
            assert len(b.base) == k and is_clique(g, b.base, color)
            assert common_neighbours(g, b.base, color) == b.pages


@given(graphs(min_n=2))
def test_hex_round_trip(g):
    text = g.to_hex()
    assert ColoredCompleteGraph.from_hex(text) == g
    assert hash(ColoredCompleteGraph.from_hex(text)) == hash(g)


def test_hex_known_value():
    # pairs (0,1),(0,2),(1,2): only (0,2) red -> bits 010 -> padded 0100
    g = ColoredCompleteGraph.from_red_relation(3, [(0, 2)])
    assert g.to_hex() == "3:4"


@pytest.mark.parametrize("text", ["x:00", "3:", "3:44", "3:g", "3:1", "0:"])
def test_hex_rejects(text):
    with pytest.raises(GraphError):
        ColoredCompleteGraph.from_hex(text)


@given(graphs(min_n=2), st.data())
def test_flip_locality(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
    h = g.with_flipped(u, v)
    assert h.is_red(u, v) != g.is_red(u, v)
    for color in Color:
        before, after = codegree_matrix(g, color), codegree_matrix(h, color)
        changed = np.argwhere(before != after)
        for a, b in changed:
            if a != b:
                assert {a, b} & {u, v}


@given(graphs(min_n=2), st.randoms(use_true_random=False))
def test_relabel_and_swap_invariance(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabeled(perm)
    s = g.swapped()
    for color in Color:
        assert book_size(h, color).pages == book_size(g, color).pages
        assert book_size(s, color.other).pages == book_size(g, color).pages


def test_relabel_moves_edges():
    g = ColoredCompleteGraph.from_red_relation(4, [(0, 1)])
    h = g.relabeled([2, 3, 0, 1])
    assert h.is_red(2, 3) and not h.is_red(0, 1)


def test_color_of_and_counts():
    g = pentagon()
    assert g.color_of(0, 1) is Color.RED and g.color_of(0, 2) is Color.BLUE
    assert g.n_edges(Color.RED) == 5 and g.n_edges(Color.BLUE) == 5
    assert Color.RED.other is Color.BLUE


def test_turan_floor(rng):
    for n in (1, 5, 13, 30):
        g = random_graph(rng, n, 0.3)
        floor, indep = turan_independence_floor(g, Color.RED)
        d = 2 * g.n_edges(Color.RED) / n
        assert floor == int(np.ceil(n / (1 + d) - 1e-12))
        assert len(indep) >= floor
        assert is_clique(g, indep, Color.BLUE)


def test_pair_density():
    g = ColoredCompleteGraph.from_red_relation(4, [(0, 2), (1, 3), (0, 3)])
    rep = pair_density(g, [0, 1], [2, 3])
    assert rep.red_density == pytest.approx(0.75)
    assert rep.red_density + rep.blue_density == 1
    with pytest.raises(GraphError):
        pair_density(g, [0, 1], [1, 2])
    with pytest.raises(GraphError):
        pair_density(g, [], [1])


def test_large_graph_multiword_rows(rng):
    g = random_graph(rng, 150)
    for color in Color:
        co = codegree_matrix(g, color)
        adj = g.adjacency(color)
        mask = np.triu(adj, 1)
        assert book_size(g, color).pages == co[mask].max()
        u, v = 3, 140
        assert codegree(g, u, v, color) == co[u, v]
