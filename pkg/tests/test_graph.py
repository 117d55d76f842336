import random

import pytest
from hypothesis import given, settings, strategies as st

from sparsekit.graph import (BipartiteGraph, UnbalancedDeletion, VertexKind, canonical_form,
                             canonical_form_labelled, classify_vertex, cycle, find_deg2_path3,
                             format_graph6, from_canonical, graph_j, is_named, parse_graph6,
                             read_graph)
from sparsekit.linalg import MalformedInput, format_text


@st.composite
def graphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    rows = tuple(draw(st.integers(0, (1 << n) - 1)) for _ in range(n))
    return BipartiteGraph(rows, n)


def shuffled(g, rng):
    rp = list(range(len(g.adj)))
    cp = list(range(g.ncols))
    rng.shuffle(rp)
    rng.shuffle(cp)
    adj = [0] * len(g.adj)
    for i, r in enumerate(g.adj):
        for j in range(g.ncols):
            if (r >> j) & 1:
                adj[rp[i]] |= 1 << cp[j]
    return BipartiteGraph(tuple(adj), g.ncols)


def test_basic_invariants():
    c6 = cycle(6)
    assert (c6.n, c6.v(), c6.e(), c6.k()) == (3, 6, 6, 3)
    assert c6.is_cycle() and c6.is_connected() and c6.is_c4_free()
    assert c6.girth() == 6
    c4 = cycle(4)
    assert not c4.is_c4_free()
    assert c4.find_c4() is not None
    j = graph_j()
    assert (j.v(), j.e(), j.k()) == (8, 9, 5)
    assert j.is_c4_free() and j.is_connected() and not j.is_cycle()
    lo, hi, _ = j.degree_profile()
    assert (lo, hi) == (2, 3)


def test_components_and_union():
    g = cycle(6).disjoint_union(BipartiteGraph((1,), 1))
    assert len(g.components()) == 2
    assert not g.is_connected()
    assert g.k() == 3


def test_delete_vertices_balance_check():
    c6 = cycle(6)
    with pytest.raises(UnbalancedDeletion):
        c6.delete_vertices([(0, 0)])
    h = c6.delete_vertices([(0, 0)], allow_unbalanced=True)
    assert not h.balanced
    h = c6.delete_vertices([(0, 0), (1, 0)])
    assert h.n == 2 and h.e() == 3


def test_delete_edges():
    c6 = cycle(6)
    h = c6.delete_edges([((0, 0), (1, 0))])
    assert h.e() == 5 and h.is_connected()


@settings(max_examples=150, deadline=None)
@given(graphs(), st.integers(0, 10 ** 6))
def test_canonical_form_is_invariant(g, seed):
    rng = random.Random(seed)
    h = shuffled(g, rng)
    assert canonical_form_labelled(h) == canonical_form_labelled(g)
    assert canonical_form(h.side_swap()) == canonical_form(g)
    assert canonical_form(from_canonical(canonical_form(g))) == canonical_form(g)


def test_canonical_form_separates():
    # same degree sequence, different graphs: C6+K2... vs C8
    a = cycle(6).disjoint_union(cycle(4))
    b = cycle(10)
    assert canonical_form(a) != canonical_form(b)


def test_is_named():
    assert is_named(cycle(6), "C6")
    assert is_named(BipartiteGraph((1,), 1), "K2")
    assert is_named(shuffled(graph_j(), random.Random(3)), "J")
    assert not is_named(cycle(8), "C6")


def test_classify_vertex_in_j():
    j = graph_j()
    kinds = {}
    for x in j.vertices():
        kinds.setdefault(classify_vertex(j, x).kind, []).append(x)
    # every degree-2 vertex sits next to one of the two degree-3 corners
    assert VertexKind.TYPE_I not in kinds
    assert len(kinds[VertexKind.TYPE_II]) == 6
    assert set(kinds[VertexKind.NEITHER]) == {(0, "h0"), (1, "h3")}
    c = classify_vertex(j, (1, "a"))
    assert c.y1 == (0, "b") and c.x1 == (1, "h3") and c.y2 == (0, "h0")
    assert find_deg2_path3(j) is None
    assert find_deg2_path3(cycle(8)) is not None


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=7))
def test_graph6_round_trip(g):
    assert parse_graph6(format_graph6(g)) == g
    assert read_graph(format_graph6(g)) == g
    assert read_graph(format_text(g.to_biadjacency())) == g


def test_graph6_errors():
    with pytest.raises(MalformedInput):
        parse_graph6("Ch")
    with pytest.raises(MalformedInput):
        parse_graph6("n=3\nC~")
    # K3 has an edge inside the row side
    with pytest.raises(MalformedInput):
        parse_graph6("n=1\nBw")
