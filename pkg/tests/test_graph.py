import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeromem import graph as gr
from zeromem.graph import Graph, GraphError


def nx_circumference(g: Graph) -> int:
    """Independent oracle: longest cycle from networkx's simple-cycle enumeration."""
    h = nx.Graph(list(g.edges))
    h.add_nodes_from(range(g.n))
    return max((len(c) for c in nx.simple_cycles(h)), default=0)


@st.composite
def connected_graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, v - 1)) for v in range(1, n)]
    edges = {(p, v) for v, p in zip(range(1, n), parents)}
    pairs = list(itertools.combinations(range(n), 2))
    extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs))) if pairs else []
    return Graph(n, edges | set(extra))


# ------------------------------------------------------------ constructor


def test_constructor_rejects_bad_input():
    with pytest.raises(GraphError):
        Graph(3, [(0, 0), (1, 2)])
    with pytest.raises(GraphError):
        Graph(2, [(0, 2)])
    with pytest.raises(GraphError):
        Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(GraphError):
        Graph(0, [])


def test_parallel_and_reversed_edges_collapse():
    g = Graph(2, [(0, 1), (1, 0), (0, 1)])
    assert g.m == 1
    assert g.adjacency == ((1,), (0,))


@given(connected_graphs())
def test_adjacency_is_symmetric_and_sorted(g):
    for u in range(g.n):
        assert list(g.adjacency[u]) == sorted(g.adjacency[u])
        for v in g.adjacency[u]:
            assert u in g.adjacency[v]
    assert sum(g.degrees()) == 2 * g.m


# ------------------------------------------------------------ generators


def test_build_path_examples():
    assert (gr.build_path(1).n, gr.build_path(1).m) == (1, 0)
    p7 = gr.build_path(7)
    assert (p7.n, p7.m, gr.circumference(p7)) == (7, 6, 0)
    assert gr.build_path(4).degrees() == (1, 2, 2, 1)


def test_build_square_path_examples():
    assert gr.build_square_path(3) == gr.build_complete(3)
    g18 = gr.build_square_path(18)
    assert (g18.n, g18.m) == (18, 33)
    assert gr.circumference(gr.build_square_path(5)) == 5
    assert gr.circumference(gr.build_square_path(8)) == 8


def test_merged_leaf_caterpillar_examples():
    g = gr.build_merged_leaf_caterpillar(3, 1, 3)
    assert g.n == 5
    assert gr.circumference(g) == 4
    g = gr.build_merged_leaf_caterpillar(4, 2, 3)
    shared = 2 * 4 - 2
    assert g.degree(shared) == 2
    assert set(g.neighbors(shared)) == {1, 2}
    for n0 in range(4, 9):
        assert gr.build_merged_leaf_caterpillar(n0 - 1, 1, 2).n == 2 * (n0 - 1) - 1
    with pytest.raises(GraphError):
        gr.build_merged_leaf_caterpillar(4, 3, 3)
    with pytest.raises(GraphError):
        gr.build_merged_leaf_caterpillar(4, 0, 2)


@pytest.mark.parametrize("m", range(3, 9))
def test_merged_leaf_caterpillar_size_and_circumference(m):
    for i, j in itertools.combinations(range(1, m + 1), 2):
        g = gr.build_merged_leaf_caterpillar(m, i, j)
        assert g.n == 2 * m - 1
        assert gr.circumference(g) == j - i + 2


def test_fan_examples():
    for n0 in range(3, 9):
        assert gr.build_fan(n0 - 1).n == n0
    assert gr.build_fan(2) == gr.build_complete(3)
    assert gr.build_fan(5).degree(5) == 5


def test_double_fan_examples():
    for m in range(2, 10):
        assert gr.is_bipartite(gr.build_bipartite_double_fan(m))
    g = gr.build_bipartite_double_fan(2)
    assert (g.n, g.m) == (4, 3)
    g = gr.build_bipartite_double_fan(6)
    assert g.degree(6) == 3 and g.degree(7) == 3


@pytest.mark.parametrize("k", range(3, 7))
def test_circumference_pair(k):
    g1, g2 = gr.build_circumference_pair(k)
    assert gr.circumference(g1) == k
    assert gr.circumference(g2) == k
    assert g1.n == 2 * k + 2
    assert g2.n == 2 * k + 3
    assert not nx.is_isomorphic(nx.Graph(list(g1.edges)), nx.Graph(list(g2.edges)))


def test_circumference_pair_k3_size():
    assert gr.build_circumference_pair(3)[0].n == 8
    with pytest.raises(GraphError):
        gr.build_circumference_pair(2)


@pytest.mark.parametrize("n", range(6, 11))
def test_clique_two_leaves(n):
    g = gr.build_clique_two_leaves(n)
    assert g.n == n
    clique = range(n - 3)
    assert {g.degree(c) for c in clique} == {n - 3}
    assert g.degree(n - 1) == n - 5


def test_clique_two_leaves_n8():
    g = gr.build_clique_two_leaves(8)
    assert len(list(itertools.combinations(range(5), 2))) == sum(
        1 for u, v in g.edges if u < 5 and v < 5
    )
    assert g.degree(7) == 3
    with pytest.raises(GraphError):
        gr.build_clique_two_leaves(5)


def test_fixtures_are_valid_graphs():
    assert gr.build_cant_go_back_fixture().n == 5
    g = gr.build_triangle_fan_fixture(2, 3)
    assert g.n == 8 and g.degree(1) == 7


def test_build_family_registry():
    assert gr.build_family("squarepath", n=9).n == 9
    assert gr.build_family("star", leaves=3).n == 4
    pair = gr.build_family("circpair", k=3)
    assert isinstance(pair, tuple) and len(pair) == 2
    with pytest.raises(GraphError):
        gr.build_family("nosuch")
    with pytest.raises(GraphError):
        gr.build_family("mergedleaf", m=4)


# ------------------------------------------------------------ enumeration


def test_enumerate_trees_examples():
    assert len(list(gr.enumerate_trees(3))) == 3
    assert len(list(gr.enumerate_trees(5))) == 125
    (single,) = gr.enumerate_trees(1)
    assert single.n == 1


@pytest.mark.parametrize("n", range(2, 8))
def test_enumerate_trees_cayley(n):
    trees = list(gr.enumerate_trees(n))
    assert len(trees) == n ** (n - 2)
    assert len({t.edges for t in trees}) == len(trees)
    assert all(gr.is_tree(t) for t in trees)


def test_enumerate_trees_bounds():
    with pytest.raises(GraphError):
        list(gr.enumerate_trees(11))


def _brute_connected_count(n: int) -> int:
    pairs = list(itertools.combinations(range(n), 2))
    count = 0
    for mask in range(1 << len(pairs)):
        h = nx.Graph()
        h.add_nodes_from(range(n))
        h.add_edges_from(p for t, p in enumerate(pairs) if mask >> t & 1)
        count += nx.is_connected(h)
    return count


# labeled counts frozen from the brute-force oracle above; unlabeled counts
# from the same oracle followed by isomorphism classing
LABELED_CONNECTED = {1: 1, 2: 1, 3: 4, 4: 38, 5: 728, 6: 26704}
UNLABELED_CONNECTED = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853}


@pytest.mark.parametrize("n", range(1, 7))
def test_connected_count_matches_oracle(n):
    assert _brute_connected_count(n) == LABELED_CONNECTED[n]
    assert sum(1 for _ in gr.enumerate_connected_graphs(n)) == LABELED_CONNECTED[n]


@pytest.mark.parametrize("n", range(1, 8))
def test_dedup_counts_and_classes(n):
    reps = list(gr.enumerate_connected_graphs(n, dedup=True))
    assert len(reps) == UNLABELED_CONNECTED[n]
    if n <= 5:
        # every labeled graph is isomorphic to exactly one representative
        hs = [nx.Graph(list(r.edges)) for r in reps]
        for h in hs:
            h.add_nodes_from(range(n))
        for g in gr.enumerate_connected_graphs(n):
            x = nx.Graph(list(g.edges))
            x.add_nodes_from(range(n))
            assert sum(nx.is_isomorphic(x, h) for h in hs) == 1


def test_enumeration_is_deterministic():
    assert [g.edges for g in gr.enumerate_connected_graphs(4)] == [
        g.edges for g in gr.enumerate_connected_graphs(4)
    ]
    with pytest.raises(GraphError):
        list(gr.enumerate_connected_graphs(8))


# ------------------------------------------------------------ analyses


def test_circumference_examples():
    assert gr.circumference(gr.build_complete(3)) == 3
    assert gr.circumference(gr.build_path(6)) == 0
    assert gr.circumference(gr.build_complete(6)) == 6
    assert gr.circumference(gr.build_cycle(7)) == 7


@settings(max_examples=300, deadline=None)
@given(connected_graphs(max_n=8))
def test_circumference_matches_cycle_enumeration(g):
    assert gr.circumference(g) == nx_circumference(g)


def test_circumference_all_small_graphs():
    for n in range(1, 7):
        for g in gr.enumerate_connected_graphs(n, dedup=True):
            assert gr.circumference(g) == nx_circumference(g)


def test_circumference_size_limit():
    with pytest.raises(GraphError):
        gr.circumference(gr.build_path(17))


def test_classify_examples():
    c = gr.classify(gr.build_path(5))
    assert (c.is_tree, c.is_bipartite, c.is_square_path) == (True, True, False)
    c = gr.classify(gr.build_square_path(6))
    assert (c.is_tree, c.is_bipartite, c.is_square_path) == (False, False, True)
    c = gr.classify(gr.build_complete(4))
    assert (c.is_tree, c.is_bipartite, c.is_square_path) == (False, False, False)


def test_square_path_recognition_against_isomorphism():
    for n in range(1, 8):
        target = nx.Graph(list(gr.build_square_path(n).edges))
        target.add_nodes_from(range(n))
        for g in gr.enumerate_connected_graphs(n, dedup=True):
            h = nx.Graph(list(g.edges))
            h.add_nodes_from(range(n))
            assert gr.is_square_path(g) == nx.is_isomorphic(h, target), sorted(g.edges)


@given(connected_graphs(max_n=9), st.randoms(use_true_random=False))
def test_square_path_recognised_under_relabeling(g, rnd):
    n = g.n
    perm = list(range(n))
    rnd.shuffle(perm)
    sp = gr.build_square_path(n).relabel(perm)
    assert gr.is_square_path(sp)


def test_bipartite_and_tree_flags_match_networkx():
    for g in gr.enumerate_connected_graphs(5, dedup=True):
        h = nx.Graph(list(g.edges))
        h.add_nodes_from(range(g.n))
        assert gr.is_bipartite(g) == nx.is_bipartite(h)
        assert gr.is_tree(g) == nx.is_tree(h)


# ------------------------------------------------------------ I/O


def test_format_is_bit_exact():
    assert gr.format_graph(gr.build_path(3)) == "3 2\n0 1\n1 2\n"
    assert gr.format_graph(gr.build_path(1)) == "1 0\n"


@given(connected_graphs())
def test_format_round_trip(g):
    assert gr.parse_graph(gr.format_graph(g)) == g


def test_parse_accepts_comments_and_rejects_garbage():
    g = gr.parse_graph("# a triangle\n3 3\n0 1\n# middle\n0 2\n1 2\n")
    assert g == gr.build_complete(3)
    for bad in ("3 2\n1 0\n1 2\n", "3 3\n0 1\n1 2\n", "3 2\n1 2\n0 1\n", "3 2\n0 1\n0 1\n", "x\n"):
        with pytest.raises(GraphError):
            gr.parse_graph(bad)


def test_file_round_trip(tmp_path):
    g = gr.build_fan(4)
    p = tmp_path / "fan.g"
    gr.write_graph(g, p)
    assert gr.read_graph(p) == g


def test_dot_export():
    dot = gr.to_dot(gr.build_path(3), (1, 0, 2))
    assert dot.startswith("graph G {")
    assert "0 -- 1;" in dot and "1 -- 2;" in dot
    assert f'fillcolor="{gr.dot_fill(1)}"' in dot
    assert gr.dot_fill(0) == "white"
