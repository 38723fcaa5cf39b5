"""Chromatic number, bipartite edge frustration and the edge-stability number"""

import random

import pytest
from hypothesis import given, settings

from chromatic_stability import (
    METHOD_CLOSED_FORM, METHOD_ODD_CYCLE_BRANCHING, METHOD_SUBSET_SEARCH, CutTable,
    bipartite_edge_frustration, chromatic_number, co_removal_set, cut_frustration,
    edge_stability_number, exhaustive_edge_stability, is_k_colorable, minimum_frustration_sets,
    single_edge_bipartizers,
)
from escrit_errors import BoundExceededError, PreconditionError
from families import build_family, family_grid
from graph_core import Graph, from_edge_list, is_bipartite, pair_count, to_graph6
from graph_strategies import graphs


def complete(n, offset=0):
    return [(offset + i, offset + j) for i in range(n) for j in range(i + 1, n)]


def cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


K4 = from_edge_list(4, complete(4))
K5 = from_edge_list(5, complete(5))
C4 = from_edge_list(4, cycle(4))
C5 = from_edge_list(5, cycle(5))
C6 = from_edge_list(6, cycle(6))
BOWTIE = from_edge_list(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)])
TWO_TRIANGLES = from_edge_list(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
TWO_K4 = from_edge_list(8, complete(4) + complete(4, offset=4))
PETERSEN = from_edge_list(10, cycle(5) + [(i, i + 5) for i in range(5)]
                          + [(i + 5, (i + 2) % 5 + 5) for i in range(5)])


# =============================================================================
# Coloring
# =============================================================================

@pytest.mark.parametrize("g, chi", [
    (Graph(0, ()), 0),
    (Graph(3, ()), 1),
    (C4, 2),
    (C5, 3),
    (K4, 4),
    (K5, 5),
    (PETERSEN, 3),
    (BOWTIE, 3),
])
def test_chromatic_number(g, chi):
    assert chromatic_number(g) == chi


def test_coloring_witness_is_proper():
    result = is_k_colorable(PETERSEN, 3)
    assert result
    assert all(result.coloring[u] != result.coloring[v] for u, v in PETERSEN.edges)
    assert set(result.coloring) == {0, 1, 2}
    assert not is_k_colorable(PETERSEN, 2)
    assert not is_k_colorable(K5, 4)


def test_is_k_colorable_rejects_negative_k():
    with pytest.raises(PreconditionError):
        is_k_colorable(C4, -1)


def test_chromatic_number_bound():
    with pytest.raises(BoundExceededError):
        chromatic_number(C5, bound=4)
    # bipartite graphs are answered regardless of the bound
    assert chromatic_number(C6, bound=2) == 2


# =============================================================================
# Frustration
# =============================================================================

def test_bipartite_edge_frustration():
    assert bipartite_edge_frustration(C4, 0) == 0
    assert bipartite_edge_frustration(C5, 3) == 1
    assert bipartite_edge_frustration(K4, 1) is None
    assert bipartite_edge_frustration(K4, 2) == 2


def test_minimum_frustration_sets_of_k4_are_perfect_matchings():
    assert minimum_frustration_sets(K4) == [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]


def test_minimum_frustration_sets_within_budget():
    assert minimum_frustration_sets(K4, max_es=1) == []
    assert minimum_frustration_sets(C4) == [()]


def test_single_edge_bipartizers():
    assert single_edge_bipartizers(C5) == C5.edges
    assert single_edge_bipartizers(BOWTIE) == ()
    assert single_edge_bipartizers(C4) == C4.edges


def test_cut_table():
    assert CutTable(3).frustration(0b111) == 1
    assert len(CutTable(4).noncut_masks) == 8
    assert CutTable(1).frustration(0) == 0


def test_cut_frustration_bound():
    with pytest.raises(BoundExceededError):
        cut_frustration(PETERSEN, bound=9)


def test_branching_agrees_with_cut_enumeration_on_five_vertices():
    for mask in range(1 << pair_count(5)):
        g = Graph.from_mask(5, mask)
        assert bipartite_edge_frustration(g, g.m) == cut_frustration(g)


@pytest.mark.property_based
@given(graphs(min_n=7, max_n=8))
@settings(max_examples=60)
def test_frustration_property_on_larger_graphs(g):
    cut = cut_frustration(g)
    if cut > 5:
        return
    assert bipartite_edge_frustration(g, cut) == cut
    if cut:
        assert bipartite_edge_frustration(g, cut - 1) is None


# =============================================================================
# Edge-stability number
# =============================================================================

def test_es_of_bipartite_graph_is_edge_count():
    report = edge_stability_number(C6)
    assert (report.chi, report.es, report.method) == (2, 6, METHOD_CLOSED_FORM)
    assert report.witness == C6.edges


def test_es_of_two_disjoint_triangles():
    report = edge_stability_number(TWO_TRIANGLES)
    assert (report.chi, report.es, report.method) == (3, 2, METHOD_ODD_CYCLE_BRANCHING)
    assert report.witness == ((0, 1), (3, 4))


def test_es_by_subset_search():
    report = edge_stability_number(K4)
    assert (report.chi, report.es, report.method) == (4, 1, METHOD_SUBSET_SEARCH)
    report = edge_stability_number(TWO_K4)
    assert (report.es, report.witness) == (2, ((0, 1), (4, 5)))


def test_es_report_to_dict():
    assert edge_stability_number(C5).to_dict() == {
        'chi': 3, 'es': 1, 'witness': [[0, 1]], 'method': METHOD_ODD_CYCLE_BRANCHING,
    }


def test_es_errors():
    with pytest.raises(PreconditionError):
        edge_stability_number(Graph(4, ()))
    with pytest.raises(PreconditionError):
        exhaustive_edge_stability(Graph(4, ()))
    with pytest.raises(BoundExceededError):
        edge_stability_number(K4, max_es=0)
    with pytest.raises(BoundExceededError):
        edge_stability_number(C5, max_es=0)


def test_exhaustive_oracle_on_small_cases():
    assert exhaustive_edge_stability(TWO_TRIANGLES).witness == ((0, 1), (3, 4))
    assert exhaustive_edge_stability(C4).es == 4
    with pytest.raises(BoundExceededError):
        exhaustive_edge_stability(C6)


def _check_against_oracle(n):
    for mask in range(1 << pair_count(n)):
        g = Graph.from_mask(n, mask)
        if is_bipartite(g):
            continue
        fast = edge_stability_number(g, max_es=g.m)
        slow = exhaustive_edge_stability(g, max_es=g.m)
        assert (fast.chi, fast.es) == (slow.chi, slow.es), g.edges
        assert chromatic_number(g.without_edges(fast.witness)) < fast.chi


def test_es_matches_oracle_on_five_vertices():
    _check_against_oracle(5)


@pytest.mark.slow
def test_es_matches_oracle_on_six_vertices():
    _check_against_oracle(6)


# =============================================================================
# Co-removal sets
# =============================================================================

def test_co_removal_set_of_two_triangles():
    result = co_removal_set(TWO_TRIANGLES, (1, 0))
    assert result.anchor == (0, 1)
    assert result.partners == ((3, 4), (3, 5), (4, 5))
    assert result.to_dict() == {'anchor': [0, 1], 'partners': [[3, 4], [3, 5], [4, 5]]}


def test_co_removal_set_of_odd_cycle():
    # C5 minus any two edges is a forest
    assert co_removal_set(C5, (0, 1)).partners == C5.without_edges([(0, 1)]).edges


def test_co_removal_set_rejects_non_edge():
    with pytest.raises(PreconditionError):
        co_removal_set(C4, (0, 2))


def test_co_removal_sets_of_family_members_are_nonempty():
    for spec in family_grid(9):
        g = build_family(spec)
        assert chromatic_number(g) == 3
        for e in g.edges:
            partners = co_removal_set(g, e).partners
            assert partners, (spec.to_compact(), e)
            for f in partners:
                assert chromatic_number(g.without_edges([e, f])) == 2


def _assert_small_frustration_matches_subset_search(g):
    if g.m == 0 or chromatic_number(g) != 3:
        return
    try:
        expected = exhaustive_edge_stability(g, max_es=2).es
    except BoundExceededError:
        expected = None
    assert bipartite_edge_frustration(g, 2) == expected, to_graph6(g)


@pytest.mark.property_based
@given(graphs(min_n=7, max_n=8))
def test_small_frustration_decision_matches_subset_search(g):
    _assert_small_frustration_matches_subset_search(g)


@pytest.mark.slow
def test_small_frustration_decision_on_ten_thousand_random_graphs():
    rng = random.Random(20240601)
    for _ in range(10_000):
        n = rng.choice((7, 8))
        _assert_small_frustration_matches_subset_search(Graph.from_mask(n, rng.getrandbits(pair_count(n))))
