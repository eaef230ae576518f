import json
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from centgraph.builders import commuting_graph
from centgraph.graphs import (
    GraphError,
    IsomorphismLimitError,
    SimpleGraph,
    classify_vertex,
    closed_twin_partition,
    components,
    extend_iso_by_twin_permutations,
    is_isomorphism,
    isomorphic,
    nontrivial_components,
    quotient_by_twins,
    to_dot,
    to_json,
    vertex_statuses,
)

from conftest import table


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return SimpleGraph.from_edges(n, chosen)


@st.composite
def twin_heavy_graphs(draw):
    """Blow up a small graph by replacing vertices with cliques, so twins abound."""
    base = draw(graphs(max_n=6))
    sizes = [draw(st.integers(1, 3)) for _ in range(base.n)]
    start = np.cumsum([0] + sizes)
    edges = []
    for v in range(base.n):
        block = range(start[v], start[v + 1])
        edges += [(a, b) for a in block for b in block if a < b]
        for w in base.neighbors(v):
            if w > v:
                edges += [(a, b) for a in block for b in range(start[w], start[w + 1])]
    return SimpleGraph.from_edges(int(start[-1]), edges)


def to_nx(g: SimpleGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def closed_nbhd(h, v):
    return set(h[v]) | {v}


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_components_and_diameters_match_networkx(g):
    h = to_nx(g)
    ours = sorted((sorted(c.vertices), c.diameter, c.is_complete) for c in components(g))
    theirs = []
    for comp in nx.connected_components(h):
        sub = h.subgraph(comp)
        d = nx.diameter(sub)
        k = len(comp)
        theirs.append((sorted(comp), d, sub.number_of_edges() == k * (k - 1) // 2))
    assert ours == sorted(theirs)


@settings(max_examples=80, deadline=None)
@given(st.one_of(graphs(), twin_heavy_graphs()))
def test_twin_partition_matches_closed_neighborhoods(g):
    h = to_nx(g)
    t = closed_twin_partition(g)
    for u in range(g.n):
        for v in range(g.n):
            same = closed_nbhd(h, u) == closed_nbhd(h, v)
            assert (t.class_of[u] == t.class_of[v]) == same
    q = quotient_by_twins(g, t)
    assert q.n == len(t)
    # the quotient is twin-free and reflects adjacency of representatives
    assert len(closed_twin_partition(q)) == q.n
    for a, ca in enumerate(t.classes):
        for b, cb in enumerate(t.classes):
            if a != b:
                assert q.has_edge(a, b) == h.has_edge(ca[0], cb[0])


@settings(max_examples=60, deadline=None)
@given(st.one_of(graphs(), twin_heavy_graphs()))
def test_quotient_keeps_component_count_and_diameter_bound(g):
    q = quotient_by_twins(g)
    big = sorted(c.diameter for c in components(g))
    small = sorted(c.diameter for c in components(q))
    assert len(big) == len(small)
    # merging twins never changes a distance of 2 or more
    assert [d for d in big if d >= 2] == [d for d in small if d >= 2]


@settings(max_examples=80, deadline=None)
@given(st.one_of(graphs(), twin_heavy_graphs()))
def test_bulk_statuses_agree_with_single_vertex_classifier(g):
    h = to_nx(g)
    bulk = vertex_statuses(g)
    for v in range(g.n):
        one = classify_vertex(g, v)
        assert bulk[v].kind == one.kind
        if not h[v]:
            assert one.kind == "isolated"
            continue
        doms = {w for w in h[v] if closed_nbhd(h, v) < closed_nbhd(h, w)}
        assert set(one.dominators) == doms
        assert one.kind == ("subordinate" if doms else "independent")


def test_star_statuses():
    g = SimpleGraph.from_edges(5, [(0, 1), (0, 2), (0, 3)])
    kinds = [s.kind for s in vertex_statuses(g)]
    assert kinds == ["independent", "subordinate", "subordinate", "subordinate", "isolated"]
    assert classify_vertex(g, 2).dominators == (0,)
    assert str(classify_vertex(g, 1)) == "subordinateTo(0)"


@settings(max_examples=60, deadline=None)
@given(st.one_of(graphs(), twin_heavy_graphs()), st.randoms(use_true_random=False))
def test_isomorphic_finds_relabelings(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = SimpleGraph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])
    f = isomorphic(g, h)
    assert f is not None and is_isomorphism(g, h, f)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8), graphs(max_n=8))
def test_isomorphic_agrees_with_networkx(g1, g2):
    f = isomorphic(g1, g2)
    assert (f is not None) == nx.is_isomorphic(to_nx(g1), to_nx(g2))
    if f is not None:
        assert is_isomorphism(g1, g2, f)


def test_small_isomorphism_cases():
    k3 = SimpleGraph.complete(3)
    p3 = SimpleGraph.path(3)
    assert isomorphic(k3, p3) is None
    assert isomorphic(k3, k3) is not None
    # same degree sequence, different graphs: C6 against two triangles
    c6 = SimpleGraph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    tt = SimpleGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert isomorphic(c6, tt) is None


def test_commuting_graphs_of_d18_and_gd18_are_isomorphic():
    g1 = commuting_graph(table("D18")).graph
    g2 = commuting_graph(table("GD18")).graph
    f = isomorphic(g1, g2)
    assert f is not None and is_isomorphism(g1, g2, f)
    assert nx.is_isomorphic(to_nx(g1), to_nx(g2))


def test_twin_permutation_extension():
    q8 = commuting_graph(table("Q8")).graph
    f = isomorphic(q8, q8)
    t = closed_twin_partition(q8)
    a, b = t.classes[0]
    g = extend_iso_by_twin_permutations(q8, q8, f, {a: b, b: a})
    assert g[a] == f[b] and g[b] == f[a]
    path = SimpleGraph.path(3)
    with pytest.raises(GraphError):
        extend_iso_by_twin_permutations(path, path, {0: 0, 1: 1, 2: 2}, {0: 1, 1: 0})


def test_isomorphism_limit_applies_per_quotient_component():
    # a long path has no twins, so its quotient keeps every vertex
    p = SimpleGraph.path(40)
    with pytest.raises(IsomorphismLimitError):
        isomorphic(p, p, limit=10)
    # a big clique collapses to a single class and stays cheap
    k = SimpleGraph.complete(40)
    assert isomorphic(k, k, limit=2) is not None


def test_from_matrix_validation():
    with pytest.raises(GraphError):
        SimpleGraph.from_matrix(np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(GraphError):
        SimpleGraph.from_matrix(np.array([[1, 0], [0, 0]], dtype=bool))
    with pytest.raises(GraphError):
        SimpleGraph.from_matrix(np.zeros((2, 3), dtype=bool))
    g = SimpleGraph.from_matrix(np.array([[0, 1], [1, 0]], dtype=bool), ["a", "b"])
    assert g.edges() == [(0, 1)] and list(g.labels) == ["a", "b"]


def test_quotient_rejects_bad_partitions():
    from centgraph.graphs import TwinPartition

    p = SimpleGraph.path(3)
    with pytest.raises(GraphError):
        quotient_by_twins(p, TwinPartition(((0, 1), (2,)), (0, 0, 1)))
    with pytest.raises(GraphError):
        quotient_by_twins(p, TwinPartition(((0,), (1,)), (0, 1, 1)))


def test_dot_export():
    g = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (0, 2)], ["x", "y", 'z"q', "w"])
    dot = to_dot(g, "demo", twin_clusters=True)
    assert dot.startswith('graph "demo" {')
    assert dot.count(" -- ") == 3
    assert 'label="z\\"q"' in dot
    assert "subgraph cluster_twin0" in dot
    assert dot.count('class="component1"') == 1


def test_json_export():
    g = SimpleGraph.from_edges(5, [(0, 1), (0, 2), (0, 3)])
    doc = json.loads(to_json(g, {"group": "star"}))
    assert doc["group"] == "star"
    assert doc["edges"] == [[0, 1], [0, 2], [0, 3]]
    kinds = [v["kind"] for v in doc["vertices"]]
    assert kinds == ["independent", "subordinateTo(0)", "subordinateTo(0)", "subordinateTo(0)", "isolated"]
    assert sorted((c["size"], c["diameter"], c["complete"]) for c in doc["components"]) == [
        (1, 0, True), (4, 2, False)]


def test_nontrivial_components_drop_singletons():
    g = SimpleGraph.from_edges(5, [(0, 1)])
    assert [sorted(c.vertices) for c in nontrivial_components(g)] == [[0, 1]]


def test_distances_on_random_graph_match_networkx():
    rng = random.Random(7)
    n = 30
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.1]
    g = SimpleGraph.from_edges(n, edges)
    h = to_nx(g)
    for s in range(n):
        assert g.distances_from(s) == dict(nx.single_source_shortest_path_length(h, s))
