import pytest
from hypothesis import given, settings, strategies as st

from iepg.graphcore import (Graph, GraphError, classify, complete, components, cycle, diameter,
                            disjoint_union, empty, join, make_family, partial_join, path,
                            path_between, spanning_tree, star, vertex_boundary)


def test_families():
    assert path(3).sorted_edges() == [(1, 2), (2, 3)]
    assert cycle(3).sorted_edges() == [(1, 2), (1, 3), (2, 3)]
    w = make_family("wheel", [6])
    assert w.n == 7 and len(w.edges) == 12
    assert w.degree(7) == 6
    kb = make_family("complete_bipartite", [2, 3])
    assert kb.n == 5 and len(kb.edges) == 6


def test_duplicate_edges_rejected():
    with pytest.raises(GraphError):
        Graph.from_edges(3, [(1, 2), (2, 1)])
    with pytest.raises(GraphError):
        make_family("nonsense", [3])


def test_components():
    g = make_family("union", [2, 3])
    comps = components(g)
    assert [c.n for c, _ in comps] == [2, 3]
    assert comps[1][1] == {3: 1, 4: 2, 5: 3}
    (c4, relabel), = components(cycle(4))
    assert relabel == {i: i for i in range(1, 5)}
    assert [c.n for c, _ in components(empty(3))] == [1, 1, 1]


def test_joins():
    assert join(empty(1), empty(1)) == complete(2)
    assert join(empty(2), empty(3)) == make_family("complete_bipartite", [2, 3])
    h = complete(4)
    pj = partial_join(path(7), [1, 7], h, h.vertices)
    assert len(pj.edges) - 6 - 6 == 2 * h.n


def test_vertex_boundary():
    assert vertex_boundary(path(3), [3]) == [2]
    assert vertex_boundary(cycle(4), [1, 2]) == [3, 4]
    assert vertex_boundary(star(3), [2, 3, 4]) == [1]


def test_trees():
    t = spanning_tree(cycle(4))
    assert t.is_tree() and len(t.edges) == 3 and t.edges <= cycle(4).edges
    assert path_between(path(5), 1, 5) == (1, 2, 3, 4, 5)
    assert diameter(path(5)) == 4
    assert diameter(star(4)) == 2


def test_classify():
    assert classify(path(1)) == "path"
    assert classify(complete(2)) == "path"
    assert classify(complete(3)) == "complete"
    assert classify(cycle(5)) == "cycle"
    assert classify(star(3)) is None


def test_json_round_trip():
    g = make_family("generalized_star", [1, 2, 3])
    assert Graph.from_json(g.to_json()) == g


@st.composite
def graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@settings(max_examples=60, deadline=None)
@given(graphs(), graphs())
def test_join_counts(g, h):
    j = join(g, h)
    assert j.n == g.n + h.n
    assert len(j.edges) == len(g.edges) + len(h.edges) + g.n * h.n


@settings(max_examples=60, deadline=None)
@given(graphs(), st.data())
def test_boundary_disjoint(g, data):
    w = data.draw(st.sets(st.integers(1, g.n)))
    assert not set(vertex_boundary(g, w)) & w


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_spanning_tree_of_connected(g):
    if not g.is_connected():
        with pytest.raises(GraphError):
            spanning_tree(g)
        return
    t = spanning_tree(g)
    assert len(t.edges) == g.n - 1 and t.is_connected() and t.edges <= g.edges


@settings(max_examples=40, deadline=None)
@given(graphs(4), graphs(4))
def test_union_components(g, h):
    u = disjoint_union(g, h)
    orders = sorted(c.n for c, _ in components(u))
    assert orders == sorted([c.n for c, _ in components(g)] + [c.n for c, _ in components(h)])
