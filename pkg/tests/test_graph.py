"""Tests for SCC, BSCC and MEC decompositions and qualitative reachability."""
from __future__ import annotations

from lazydet.graph import (Component, TransitionGraph, bsccs, can_reach, mecs, prob1_reach, reachable,
                           safe_states, tarjan_sccs)


def _chain(*adjacency):
    return TransitionGraph.from_adjacency(adjacency)


class TestSccs:
    def test_reverse_topological_order(self):
        assert tarjan_sccs([[1], [2, 0], [3], [3]]) == [[3], [2], [0, 1]]

    def test_mapping_input(self):
        assert tarjan_sccs({5: [7], 7: [5]}) == [[5, 7]]

    def test_long_path_does_not_recurse(self):
        n = 20000
        adjacency = [[i + 1] for i in range(n - 1)] + [[0]]
        assert len(tarjan_sccs(adjacency)) == 1


class TestBottomComponents:
    def test_bottom_only(self):
        graph = _chain([1, 2], [1], [3], [2])
        assert bsccs(graph) == [Component(frozenset({1})), Component(frozenset({2, 3}))]

    def test_absorbing_states_are_skipped(self):
        graph = _chain([1], [])
        assert bsccs(graph) == []

    def test_component_helpers(self):
        component = Component(frozenset({4, 2}))
        assert component.anchor == 2
        assert len(component) == 2
        assert 4 in component


class TestEndComponents:
    def test_choice_is_one_mec(self, choice_mdp):
        (component,) = mecs(choice_mdp.graph())
        assert component.states == frozenset({0, 1, 2})
        assert component.enabled == {0: frozenset({0}), 1: frozenset({0}), 2: frozenset({0, 1})}

    def test_leaving_action_is_dropped(self):
        # action 1 of state 0 leads into the deadlock state 1
        graph = TransitionGraph([[(0,), (1,)], []])
        (component,) = mecs(graph)
        assert component.states == frozenset({0})
        assert component.enabled == {0: frozenset({0})}

    def test_path_into_deadlock_has_no_mec(self):
        assert mecs(TransitionGraph([[(1,)], []])) == []

    def test_removal_cascades_backwards(self):
        # 0 -> 1 -> 2 -> deadlock 3; only the self loop of 4 survives
        graph = TransitionGraph([[(1,)], [(2,)], [(3,)], [], [(4,), (0,)]])
        (component,) = mecs(graph)
        assert component.states == frozenset({4})
        assert component.enabled == {4: frozenset({0})}

    def test_random_split(self):
        # action 0 of state 0 may fall into the trap 2
        graph = TransitionGraph([[(1, 2)], [(0,)], [(2,)]])
        assert [c.states for c in mecs(graph)] == [frozenset({2})]

    def test_restricted(self, choice_mdp):
        graph = choice_mdp.graph()
        (component,) = mecs(graph, states={2})
        assert component.enabled == {2: frozenset({1})}


class TestReachability:
    def test_almost_sure_in_chain(self):
        graph = _chain([0, 1], [1], [2])
        assert prob1_reach(graph, {1}) == {0, 1}

    def test_almost_sure_needs_scheduler(self):
        graph = TransitionGraph([[(1, 2), (1,)], [(1,)], [(2,)]])
        assert prob1_reach(graph, {1}) == {0, 1}
        assert prob1_reach(graph, {1}, enabled={0: [0], 1: [0], 2: [0]}) == {1}

    def test_can_reach_and_reachable(self):
        graph = _chain([1], [2], [2], [0])
        assert can_reach(graph, {2}) == {0, 1, 2, 3}
        assert reachable(graph, {1}) == {1, 2}

    def test_safe_states(self):
        graph = TransitionGraph([[(1,), (2,)], [(0,)], [(2,)]])
        region, staying = safe_states(graph, {0, 1})
        assert region == {0, 1}
        assert staying == {0: frozenset({0}), 1: frozenset({0})}
        assert safe_states(graph, {0})[0] == set()
