#!/usr/bin/env python3

import numpy as np
import pytest

import ekrlab
from ekrlab.errors import GroupTooLarge


@pytest.fixture(name='s4_graph')
def fixture_s4_graph(s4_natural):
    return ekrlab.DerangementGraph(ekrlab.profile(s4_natural))


def test_graph(s4_graph, s4_natural):
    assert s4_graph.n == 24
    assert s4_graph.degree == 9
    assert all(bin(row).count('1') == 9 for row in s4_graph.adjacency)
    assert s4_graph.is_coclique(s4_natural.stabilizer)
    assert not s4_graph.is_edge(0, 0)


def test_max_coclique(s4_graph):
    result = ekrlab.Solver.max_coclique(s4_graph)
    assert result.optimal
    assert result.size == 6
    assert 0 in result.best_set
    assert s4_graph.is_coclique(result.best_set)
    bound = result.as_upper_bound()
    assert bound.value == 6


def test_max_clique(s4_graph):
    result = ekrlab.Solver.max_clique(s4_graph)
    assert result.optimal
    assert result.size == 4
    assert s4_graph.is_clique(result.best_set)
    assert ekrlab.is_semiregular(s4_graph.profile, result.best_set)


def test_prune_bound(psl2_4):
    graph = ekrlab.DerangementGraph(psl2_4.profile)
    result = ekrlab.Solver.max_coclique(graph, prune_bound=12.0000001)
    assert result.optimal
    assert result.size == 12
    assert result.upper_bound_used <= 12.0000001


def test_parallel_search(s4_graph):
    result = ekrlab.Solver.max_coclique(s4_graph, worker_count=2)
    assert result.optimal
    assert result.size == 6


def test_without_identity_seed(s4_graph):
    params = ekrlab.Solver.Params(time_limit=0, seed_identity=False)
    result = ekrlab.Solver.max_coclique(s4_graph, params=params)
    assert result.size == 6
    assert not result.time_limit_hit


def test_invalid_input(s4_graph, s4_natural):
    cyclic = ekrlab.find_semiregular_element(s4_natural)
    with pytest.raises(ValueError):
        ekrlab.Solver.max_coclique(s4_graph, initial=cyclic)
    with pytest.raises(GroupTooLarge):
        ekrlab.DerangementGraph(ekrlab.profile(s4_natural), max_vertices=10)
    assert np.array_equal(s4_natural.stabilizer, np.sort(s4_natural.stabilizer))


def _reversed_generators(action):
    # The same group closed from its generators in reverse order
    group = action.group
    rows = group.elements[group.generators[::-1]]
    again = ekrlab.close_group(group.degree, rows)
    assert np.array_equal(again.elements, group.elements)
    return ekrlab.coset_action(again, action.stabilizer)


@pytest.mark.parametrize("fixture", ('s4_natural', 'psl2_4'))
def test_generator_order_invariance(fixture, request):
    value = request.getfixturevalue(fixture)
    action = value if isinstance(value, ekrlab.TransitiveAction) else value.action
    graph = ekrlab.DerangementGraph(ekrlab.profile(action))
    other = ekrlab.DerangementGraph(ekrlab.profile(_reversed_generators(action)))
    assert other.adjacency == graph.adjacency

    for search in (ekrlab.Solver.max_coclique, ekrlab.Solver.max_clique):
        result = search(graph)
        again = search(other)
        assert result.optimal and again.optimal
        assert again.size == result.size
        assert np.array_equal(again.best_set, result.best_set)
