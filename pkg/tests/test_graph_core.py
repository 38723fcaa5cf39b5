"""Graph type, graph6 and edge-list formats, bipartition, blocks and ears"""

import networkx as nx
import pytest
from hypothesis import given, settings

from cycle_analysis import iter_cycles
from escrit_errors import GraphFormatError, InvalidGraphError, PreconditionError
from graph_core import (
    Bipartition, Cycle, Graph, Subgraph, bipartition_or_odd_cycle, blocks_and_cut_vertices,
    ear_decomposition, edge_index, find_open_ear, format_edge_list, from_edge_list,
    is_nonseparable, pair_count, pairs_in_index_order,
    parse_edge_list, parse_graph6, read_graph6_lines, shortest_distance, to_graph6,
)
from graph_strategies import graphs, norm_edges, to_networkx

TRIANGLE = from_edge_list(3, [(0, 1), (1, 2), (2, 0)])
K4 = from_edge_list(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
BOWTIE = from_edge_list(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])
C6 = from_edge_list(6, [(i, (i + 1) % 6) for i in range(6)])


# =============================================================================
# Graph construction
# =============================================================================

def test_from_edge_list_dedups_unordered_pairs():
    g = from_edge_list(3, [(1, 0), (0, 1), (2, 1)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.m == 2
    assert g.degrees == (1, 2, 1)
    assert g.adjacency == ((1,), (0, 2), (1,))


def test_from_edge_list_rejects_self_loop():
    with pytest.raises(InvalidGraphError, match="self-loop"):
        from_edge_list(3, [(1, 1)])


def test_from_edge_list_rejects_out_of_range_vertex():
    with pytest.raises(InvalidGraphError, match="out of range"):
        from_edge_list(3, [(0, 3)])


def test_graph_rejects_unsorted_edges():
    with pytest.raises(InvalidGraphError):
        Graph(3, ((1, 2), (0, 1)))


def test_edge_index_follows_graph6_order():
    assert pairs_in_index_order(4) == ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))
    assert [edge_index(u, v) for u, v in pairs_in_index_order(5)] == list(range(10))
    assert edge_index(3, 1) == edge_index(1, 3)


def test_mask_round_trip():
    assert Graph.from_mask(5, BOWTIE.mask) == BOWTIE
    with pytest.raises(InvalidGraphError):
        Graph.from_mask(3, 1 << 3)


def test_components_and_isolated_vertices():
    g = from_edge_list(6, [(0, 1), (2, 3), (3, 4)])
    assert g.components() == [(0, 1), (2, 3, 4), (5,)]
    assert not g.is_connected()
    assert g.isolated_vertices() == (5,)


def test_relabel_and_edge_edits():
    g = TRIANGLE.relabel([2, 0, 1])
    assert g == TRIANGLE
    assert TRIANGLE.without_edges([(2, 1)]).edges == ((0, 1), (0, 2))
    assert TRIANGLE.without_edges([(0, 1)]).with_edges([(1, 0)]) == TRIANGLE


def test_cycle_canonical_form():
    assert Cycle.from_sequence([2, 1, 0]).vertices == (0, 1, 2)
    assert Cycle.from_sequence([3, 0, 1, 2]).vertices == (0, 1, 2, 3)
    assert Cycle.from_sequence([0, 3, 2, 1]).vertices == (0, 1, 2, 3)
    c = Cycle.from_sequence([4, 2, 0])
    assert c.is_odd and c.length == 3
    assert c.edges == ((0, 2), (0, 4), (2, 4))


# =============================================================================
# graph6
# =============================================================================

@pytest.mark.parametrize("g, text", [
    (from_edge_list(2, [(0, 1)]), "A_"),
    (TRIANGLE, "Bw"),
    (K4, "C~"),
    (BOWTIE, "D{c"),
    (C6, "EhEG"),
    (Graph(0, ()), "?"),
])
def test_to_graph6_known_strings(g, text):
    assert to_graph6(g) == text
    assert parse_graph6(text) == g


def test_graph6_tolerates_header_and_whitespace():
    assert parse_graph6(">>graph6<<C~\n") == K4


def test_graph6_agrees_with_networkx_on_all_small_graphs():
    for n in range(1, 6):
        for mask in range(1 << pair_count(n)):
            g = Graph.from_mask(n, mask)
            text = to_graph6(g)
            G = nx.from_graph6_bytes(text.encode())
            assert G.number_of_nodes() == n
            assert norm_edges(G.edges()) == set(g.edges)


def test_graph6_round_trip_all_six_vertex_graphs():
    for mask in range(1 << pair_count(6)):
        g = Graph.from_mask(6, mask)
        assert parse_graph6(to_graph6(g)) == g


def test_graph6_four_byte_size_prefix():
    g = from_edge_list(63, [(0, 62), (30, 31)])
    text = to_graph6(g)
    assert text.startswith("~??~")
    assert len(text) == 4 + (pair_count(63) + 5) // 6
    assert parse_graph6(text) == g


def test_graph6_matches_networkx_bytes_with_large_size_prefix():
    g = from_edge_list(70, [(0, 69), (12, 40), (68, 69)])
    assert to_graph6(g) == nx.to_graph6_bytes(to_networkx(g), header=False).decode().strip()
    assert parse_graph6(to_graph6(g)) == g


@pytest.mark.parametrize("text, message", [
    ("A", "malformed graph6"),
    ("A__", "malformed graph6"),
    ("A`", "padding"),
    ("B w", "out of range"),
    ("", "empty"),
    ("~?", "truncated"),
])
def test_graph6_errors(text, message):
    with pytest.raises(GraphFormatError, match=message):
        parse_graph6(text)


def test_read_graph6_lines_skips_blanks_and_headers():
    lines = [">>graph6<<", "", "Bw", ">>graph6<<A_", "   "]
    assert list(read_graph6_lines(lines)) == [TRIANGLE, from_edge_list(2, [(0, 1)])]


@pytest.mark.property_based
@given(graphs(max_n=20))
@settings(max_examples=100)
def test_graph6_round_trip_property(g):
    assert parse_graph6(to_graph6(g)) == g


# =============================================================================
# Edge lists
# =============================================================================

def test_edge_list_round_trip():
    text = format_edge_list(BOWTIE)
    assert text.splitlines()[0] == "5 6"
    assert parse_edge_list(text) == BOWTIE


def test_edge_list_ignores_comments():
    assert parse_edge_list("# path\n3 2\n0 1\n1 2\n").edges == ((0, 1), (1, 2))


@pytest.mark.parametrize("text", ["", "3\n0 1\n", "3 2\n0 1\n", "3 1\n0 x\n", "3 1\n0 1 2\n"])
def test_edge_list_errors(text):
    with pytest.raises(GraphFormatError):
        parse_edge_list(text)


# =============================================================================
# Bipartiteness and distances
# =============================================================================

def test_bipartition_of_even_cycle():
    witness = bipartition_or_odd_cycle(C6)
    assert isinstance(witness, Bipartition)
    assert witness.is_proper(C6)


def test_odd_cycle_of_bowtie():
    witness = bipartition_or_odd_cycle(BOWTIE)
    assert isinstance(witness, Cycle)
    assert witness.is_odd
    assert witness.lies_in(BOWTIE)


@pytest.mark.property_based
@given(graphs(max_n=9))
@settings(max_examples=200)
def test_bipartition_or_odd_cycle_is_sound(g):
    witness = bipartition_or_odd_cycle(g)
    if isinstance(witness, Bipartition):
        assert witness.is_proper(g)
        assert nx.is_bipartite(to_networkx(g))
    else:
        assert witness.is_odd
        assert witness.lies_in(g)
        assert len(witness.vertex_set) == witness.length
        assert not nx.is_bipartite(to_networkx(g))


def test_shortest_distance():
    assert shortest_distance(C6, 0, 3) == 3
    assert shortest_distance(C6, 2, 2) == 0
    g = from_edge_list(4, [(0, 1), (2, 3)])
    assert shortest_distance(g, 0, 3) is None
    with pytest.raises(InvalidGraphError):
        shortest_distance(g, 0, 4)


# =============================================================================
# Blocks
# =============================================================================

def test_bowtie_blocks():
    decomposition = blocks_and_cut_vertices(BOWTIE)
    assert decomposition.cut_vertices == frozenset({0})
    assert decomposition.blocks == (((0, 1), (0, 2), (1, 2)), ((0, 3), (0, 4), (3, 4)))
    assert not is_nonseparable(BOWTIE)


def test_nonseparable_basics():
    assert is_nonseparable(K4)
    assert is_nonseparable(from_edge_list(2, [(0, 1)]))
    assert not is_nonseparable(Graph(0, ()))
    assert not is_nonseparable(from_edge_list(3, [(0, 1)]))


@pytest.mark.property_based
@given(graphs(max_n=10))
@settings(max_examples=200)
def test_blocks_agree_with_networkx(g):
    G = to_networkx(g)
    decomposition = blocks_and_cut_vertices(g)
    expected = {frozenset(norm_edges(block)) for block in nx.biconnected_component_edges(G)}
    assert {frozenset(block) for block in decomposition.blocks} == expected
    assert decomposition.cut_vertices == frozenset(nx.articulation_points(G))
    covered = [e for block in decomposition.blocks for e in block]
    assert sorted(covered) == list(g.edges)


# =============================================================================
# Ears
# =============================================================================

def test_ear_decomposition_of_k4_from_triangle():
    seed = Subgraph.from_edges([(0, 1), (1, 2), (2, 0)])
    ears = ear_decomposition(K4, seed)
    assert [ear.path for ear in ears] == [(0, 3, 1), (2, 3)]


def test_find_open_ear_prefers_chords():
    g = K4
    host = Subgraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    assert find_open_ear(g, host).path == (0, 2)


def test_find_open_ear_preconditions():
    triangle = Subgraph.from_edges([(0, 1), (1, 2), (2, 0)])
    with pytest.raises(PreconditionError, match="separable"):
        find_open_ear(BOWTIE, triangle)
    with pytest.raises(PreconditionError, match="proper"):
        find_open_ear(TRIANGLE, triangle)
    with pytest.raises(PreconditionError, match="not all edges"):
        find_open_ear(C6, triangle)
    with pytest.raises(PreconditionError, match="at least one edge"):
        find_open_ear(K4, Subgraph(frozenset({0}), frozenset()))


def test_ear_decomposition_of_spanning_seed_is_empty():
    assert ear_decomposition(C6, Subgraph.from_edges(C6.edges)) == []
    theta = from_edge_list(5, [(0, 1), (0, 2), (2, 1), (0, 3), (3, 4), (4, 1)])
    seed = Subgraph.from_edges([(0, 2), (2, 1), (0, 3), (3, 4), (4, 1)])
    assert [ear.path for ear in ear_decomposition(theta, seed)] == [(0, 1)]


def test_ear_decomposition_rejects_separable_seed():
    seed = Subgraph.from_edges([(0, 1), (1, 2)])
    with pytest.raises(PreconditionError, match="seed"):
        ear_decomposition(K4, seed)


@pytest.mark.property_based
@given(graphs(min_n=3, max_n=8).filter(lambda g: is_nonseparable(g) and g.m > g.n - 1))
@settings(max_examples=100)
def test_ear_decomposition_rebuilds_graph(g):
    seed_cycle = next(iter_cycles(g))
    current = Subgraph.from_cycle(seed_cycle)
    for ear in ear_decomposition(g, current):
        start, end = ear.endpoints
        assert start != end
        assert start in current.vertices and end in current.vertices
        assert not set(ear.internal) & current.vertices
        assert not set(ear.edges) & current.edges
        current = current.extended(ear)
        assert nx.is_biconnected(nx.Graph(list(current.edges)))
    assert current.edges == g.edge_set
