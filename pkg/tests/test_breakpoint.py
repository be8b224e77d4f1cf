"""Tests for the breakpoint construction and breakpoint-level classification."""
from __future__ import annotations

import pytest

from conftest import A, B, C, enumerated_ngbas, fuzz_count
from lazydet.automata import AcceptanceKind, RabinMark, lasso_member_ngba, lasso_run_deterministic
from lazydet.breakpoint import (BreakpointAutomaton, BreakpointState, BreakpointStep, bp_successor,
                                breakpoint_mark, breakpoint_verdict, build_breakpoint, canonical_states,
                                classify_component_breakpoint)
from lazydet.models import MDP, MarkovChain
from lazydet.product import ProductModel, explore_product, product_subset
from lazydet.random_instances import random_lasso, random_ngba
from lazydet.subset import Verdict, build_subset

X, Y, Z, YZ = 0b001, 0b010, 0b100, 0b110


class TestSuccessor:
    def test_tracking_starts_with_accepting_targets(self, b_e):
        step = bp_successor(BreakpointState(X, 1, 0), A, b_e)
        assert step == BreakpointStep(BreakpointState(YZ, 1, Y), False, True)

    def test_breakpoint_advances_index(self, b_e):
        step = bp_successor(BreakpointState(YZ, 1, Y), C, b_e)
        assert step == BreakpointStep(BreakpointState(X, 2, 0), True, False)

    def test_tracked_runs_dying_is_rejecting(self, b_e):
        step = bp_successor(BreakpointState(YZ, 1, Y), B, b_e)
        assert step == BreakpointStep(BreakpointState(X, 1, 0), False, True)

    def test_second_set_wraps_around(self, b_e):
        step = bp_successor(BreakpointState(YZ, 2, 0), B, b_e)
        assert step == BreakpointStep(BreakpointState(X, 1, 0), True, False)

    def test_blocked(self, b_e):
        assert bp_successor(BreakpointState(YZ, 1, Y), A, b_e) is None

    def test_marks(self):
        state = BreakpointState(X, 1, 0)
        assert breakpoint_mark(BreakpointStep(state, True, False)) == RabinMark(frozenset({0, 1}), frozenset())
        assert breakpoint_mark(BreakpointStep(state, False, True)) == RabinMark(frozenset({1}), frozenset({1}))
        assert breakpoint_mark(BreakpointStep(state, False, False)) == RabinMark(frozenset({1}), frozenset())

    def test_format(self, b_e):
        assert BreakpointState(YZ, 1, Y).format(b_e) == "({y,z},1,{y})"
        assert BreakpointState(X, 2, 0).format(b_e) == "({x},2,∅)"


class TestAutomaton:
    def test_running_example_states_are_valid(self, b_e):
        automaton = build_breakpoint(b_e)
        assert automaton.initial == BreakpointState(X, 1, 0)
        assert all(state.is_valid(b_e) for state in automaton.states)

    def test_running_example_fragment(self, b_e):
        assert len(build_breakpoint(b_e).states) == 4

    def test_universal_steps_are_breakpoints(self, universal):
        automaton = build_breakpoint(universal)
        assert all(step.accepting for step in automaton.transitions.values())

    def test_lazy_until_explored(self, b_e):
        automaton = BreakpointAutomaton(b_e)
        assert len(automaton.states) == 1
        automaton.step(automaton.initial, A)
        assert len(automaton.states) == 2

    @pytest.mark.parametrize("k", [1, 2])
    @pytest.mark.parametrize("n", range(1, 7))
    def test_state_count_bound(self, n, k):
        for ngba in enumerated_ngbas(n, k):
            automaton = build_breakpoint(ngba)
            assert len(automaton.states) <= k * 3 ** n
            assert all(state.is_valid(ngba) for state in automaton.states)

    def test_language_sandwich(self, rng):
        for _ in range(fuzz_count(500)):
            ngba = random_ngba(rng, num_states=int(rng.integers(1, 5)), k=int(rng.integers(1, 3)),
                               num_props=int(rng.integers(1, 3)))
            subset_under = build_subset(ngba).as_deterministic(under=True)
            subset_over = build_subset(ngba).as_deterministic(under=False)
            breakpoint = build_breakpoint(ngba)
            under = breakpoint.as_rabin(over=False)
            over = breakpoint.as_rabin(over=True)
            for _ in range(fuzz_count(200)):
                word = random_lasso(rng, ngba.alphabet)
                member = lasso_member_ngba(ngba, word)
                if lasso_run_deterministic(subset_under, word):
                    assert lasso_run_deterministic(under, word)
                if lasso_run_deterministic(under, word):
                    assert member
                if member:
                    assert lasso_run_deterministic(over, word)
                    assert lasso_run_deterministic(subset_over, word)

    def test_buchi_view_matches_under_approximation(self, rng):
        for _ in range(fuzz_count(60)):
            ngba = random_ngba(rng, num_states=3, k=2, num_props=1)
            breakpoint = build_breakpoint(ngba)
            buchi = breakpoint.as_buchi()
            under = breakpoint.as_rabin(over=False)
            for _ in range(10):
                word = random_lasso(rng, ngba.alphabet)
                assert lasso_run_deterministic(buchi, word) == lasso_run_deterministic(under, word)


class TestClassification:
    def test_running_example_is_accepting(self, m_e, b_e):
        subset_product = product_subset(m_e, b_e)
        (component,) = subset_product.components()
        verdict, local = classify_component_breakpoint(subset_product, component, b_e)
        assert verdict is Verdict.ACCEPTING
        assert local.num_states >= 1

    def test_canonical_order(self, m_e, b_e):
        subset_product = product_subset(m_e, b_e)
        order = canonical_states(subset_product, range(subset_product.num_states))
        assert [subset_product.states[s] for s in order] == [(0, YZ), (1, X), (2, X)]


def _two_bottoms(model):
    """0 splits into the loops 1 (labelled p) and 2; the loop on 1 never
    sees a tracked set die, the loop on 2 always does"""

    def step(state, symbol):
        if symbol:
            return "kept", RabinMark(frozenset({1}), frozenset())
        return "dying", RabinMark(frozenset({1}), frozenset({1}))

    local = ProductModel(model, None, AcceptanceKind.RABIN)
    return explore_product(model, [0, 1, 0], [(0, "start", 1.0)], step, local)


class TestVerdictRule:
    def test_one_rejecting_bottom_rejects_a_chain(self):
        chain = MarkovChain(("p",), [[], ["p"], []], {0: 1.0}, [[(1, 0.5), (2, 0.5)], [(1, 1.0)], [(2, 1.0)]])
        assert breakpoint_verdict(_two_bottoms(chain)) is Verdict.REJECTING

    def test_mdp_keeps_the_better_end_component(self):
        mdp = MDP(("p",), [[], ["p"], []], {0: 1.0},
                  [[("go", [(1, 0.5), (2, 0.5)])], [("stay", [(1, 1.0)])], [("stay", [(2, 1.0)])]])
        assert breakpoint_verdict(_two_bottoms(mdp)) is Verdict.UNKNOWN
