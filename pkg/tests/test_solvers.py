"""Tests for the reachability solvers."""
from __future__ import annotations

import numpy as np
import pytest

from lazydet.exceptions import ConvergenceError
from lazydet.models import MDP, MarkovChain
from lazydet.solvers import reach_probability_max_mdp, reach_probability_mc


@pytest.fixture
def lingering_chain():
    """0 stays with 1/2, reaches the target 1 or the trap 2 with 1/4 each"""
    rows = [[(0, 0.5), (1, 0.25), (2, 0.25)], [(1, 1.0)], [(2, 1.0)]]
    return MarkovChain((), [[], [], []], {0: 1.0}, rows)


@pytest.fixture
def gamble():
    """0 picks a fair coin or a 30% coin for the target 1; 2 is a trap"""
    actions = [
        [("fair", [(1, 0.5), (2, 0.5)]), ("biased", [(1, 0.3), (2, 0.7)])],
        [("stay", [(1, 1.0)])],
        [("stay", [(2, 1.0)])],
    ]
    return MDP((), [[], [], []], {0: 1.0}, actions)


class TestChain:
    def test_direct(self, lingering_chain, settings):
        values = reach_probability_mc(lingering_chain, {1}, settings)
        np.testing.assert_allclose(values, [0.5, 1.0, 0.0])

    def test_iterative(self, lingering_chain, settings):
        iterative = settings.override(DIRECT_SOLVE_LIMIT=0)
        values = reach_probability_mc(lingering_chain, {1}, iterative)
        np.testing.assert_allclose(values, [0.5, 1.0, 0.0], atol=1e-10)

    def test_no_convergence(self, lingering_chain, settings):
        with pytest.raises(ConvergenceError) as excinfo:
            reach_probability_mc(lingering_chain, {1}, settings.override(DIRECT_SOLVE_LIMIT=0, MAX_ITERATIONS=1))
        assert excinfo.value.iterations == 1

    def test_empty_target(self, lingering_chain, settings):
        assert not reach_probability_mc(lingering_chain, set(), settings).any()

    def test_running_example_is_recurrent(self, m_e, settings):
        np.testing.assert_allclose(reach_probability_mc(m_e, {1}, settings), [1.0, 1.0, 1.0])


class TestMdp:
    def test_best_action(self, gamble, settings):
        values = reach_probability_max_mdp(gamble, {1}, settings)
        np.testing.assert_allclose(values, [0.5, 1.0, 0.0])

    def test_unreachable_target(self, gamble, settings):
        assert not reach_probability_max_mdp(gamble, set(), settings).any()

    def test_single_action_matches_chain(self, lingering_chain, settings):
        as_mdp = MDP((), [[], [], []], {0: 1.0},
                     [[("only", list(d))] for s in range(3) for d in lingering_chain.distributions(s)])
        np.testing.assert_allclose(reach_probability_max_mdp(as_mdp, {1}, settings),
                                   reach_probability_mc(lingering_chain, {1}, settings), atol=1e-10)

    def test_almost_sure_by_scheduler(self, loop_mdp, settings):
        values = reach_probability_max_mdp(loop_mdp, {0}, settings)
        np.testing.assert_allclose(values, [1.0, 1.0])
