# lazydet/breakpoint.py
"""Breakpoint construction for generalized Büchi automata.

States are triples (R, j, C): R is the reached subset, j the accepting set
currently waited for (1-based) and C ⊊ R the states that have seen set j
since the last breakpoint. A breakpoint (C catching up with R) is an
accepting transition; the tracked set dying out is a rejecting one.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

from .automata import (AcceptanceKind, DeterministicAutomaton, NGBA, RabinMark, format_mask)
from .product import accepting_components, component_product
from .subset import Verdict

logger = logging.getLogger(__name__)


class BreakpointState(NamedTuple):
    reached: int
    index: int
    tracking: int

    def format(self, ngba: NGBA) -> str:
        names = ngba.state_names
        tracked = format_mask(self.tracking, names) if self.tracking else "∅"
        return f"({format_mask(self.reached, names)},{self.index},{tracked})"

    def is_valid(self, ngba: NGBA) -> bool:
        return (self.reached != 0
                and not self.tracking & ~self.reached
                and self.tracking != self.reached
                and 1 <= self.index <= ngba.k)


@dataclass(frozen=True)
class BreakpointStep:
    state: BreakpointState
    accepting: bool
    rejecting: bool


def bp_successor(state: BreakpointState, symbol: int, ngba: NGBA) -> Optional[BreakpointStep]:
    """Breakpoint transition, or None when every run is blocked"""
    reached = ngba.post(state.reached, symbol)
    if not reached:
        return None
    followed = ngba.post(state.tracking, symbol)
    tracking = followed | ngba.post_accepting(state.reached, symbol, state.index - 1)
    if tracking == reached:
        return BreakpointStep(BreakpointState(reached, state.index % ngba.k + 1, 0), True, False)
    return BreakpointStep(BreakpointState(reached, state.index, tracking), False, followed == 0)


def breakpoint_mark(step: BreakpointStep) -> RabinMark:
    """Rabin view shared by both approximations.

    Pair 0 is (A_ε, ∅); pair 1 is (all transitions, R_0). Restricting to
    pair 0 gives the under-approximation."""
    accepting = frozenset({0, 1}) if step.accepting else frozenset({1})
    return RabinMark(accepting, frozenset({1}) if step.rejecting else frozenset())


class BreakpointAutomaton:
    def __init__(self, ngba: NGBA, initial: Optional[BreakpointState] = None):
        self.ngba = ngba
        if initial is None:
            initial = BreakpointState(ngba.initial_mask, 1, 0)
        self.initial = initial
        self.states: List[BreakpointState] = [initial]
        self.index: Dict[BreakpointState, int] = {initial: 0}
        self.transitions: Dict[Tuple[BreakpointState, int], Optional[BreakpointStep]] = {}

    def step(self, state: BreakpointState, symbol: int) -> Optional[BreakpointStep]:
        key = (state, symbol)
        if key not in self.transitions:
            result = bp_successor(state, symbol, self.ngba)
            self.transitions[key] = result
            if result is not None and result.state not in self.index:
                self.index[result.state] = len(self.states)
                self.states.append(result.state)
        return self.transitions[key]

    def explore(self) -> "BreakpointAutomaton":
        queue = deque(self.states)
        seen = set(self.states)
        while queue:
            state = queue.popleft()
            for symbol in self.ngba.alphabet.symbols():
                result = self.step(state, symbol)
                if result is not None and result.state not in seen:
                    seen.add(result.state)
                    queue.append(result.state)
        logger.debug(f"breakpoint automaton: {len(self.states)} states")
        return self

    def _edges(self):
        self.explore()
        for (state, symbol), result in sorted(self.transitions.items(), key=lambda e: (self.index[e[0][0]], e[0][1])):
            if result is not None:
                yield self.index[state], symbol, self.index[result.state], result

    def _labels(self) -> Tuple[str, ...]:
        return tuple(s.format(self.ngba) for s in self.states)

    def as_rabin(self, over: bool) -> DeterministicAutomaton:
        """BP^o with pairs (A_ε, ∅) and (T', R_0); BP^u with (A_ε, ∅) only"""
        transitions = {}
        for source, symbol, target, result in self._edges():
            mark = breakpoint_mark(result)
            if not over:
                mark = RabinMark(mark.accepting & {0}, frozenset())
            transitions[(source, symbol)] = (target, mark)
        return DeterministicAutomaton(self.ngba.alphabet, len(self.states), 0, transitions,
                                      AcceptanceKind.RABIN, 2 if over else 1, self._labels())

    def as_buchi(self) -> DeterministicAutomaton:
        transitions = {(source, symbol): (target, frozenset({0}) if result.accepting else frozenset())
                       for source, symbol, target, result in self._edges()}
        return DeterministicAutomaton(self.ngba.alphabet, len(self.states), 0, transitions,
                                      AcceptanceKind.BUCHI, 1, self._labels())


def build_breakpoint(ngba: NGBA, initial: Optional[BreakpointState] = None) -> BreakpointAutomaton:
    return BreakpointAutomaton(ngba, initial).explore()


def breakpoint_step(ngba: NGBA):
    """Successor function with Rabin marks, for local products"""

    def step(state: BreakpointState, symbol: int):
        result = bp_successor(state, symbol, ngba)
        return None if result is None else (result.state, breakpoint_mark(result))

    return step


def canonical_states(subset_product, states) -> List[int]:
    """Product states ordered by (model state, subset bit set)"""
    return sorted(states, key=lambda s: subset_product.states[s])


def breakpoint_verdict(local) -> Verdict:
    """Verdict of a local breakpoint product.

    Any BP^u-accepting bottom component accepts. For chains every bottom
    component lies over the same component of M × S, so one BP^o-rejecting
    bottom component rejects; for MDPs all end components must reject."""
    if accepting_components(local, pairs=[0]):
        return Verdict.ACCEPTING
    over = accepting_components(local)
    if local.is_mdp:
        rejecting = not over
    else:
        rejecting = any(component not in over for component in local.components())
    return Verdict.REJECTING if rejecting else Verdict.UNKNOWN


def classify_component_breakpoint(subset_product, component, ngba: NGBA):
    """Run BP^u and BP^o from the first state (m, R) of a component.

    Returns the verdict and the local product that was explored."""
    start = canonical_states(subset_product, component.states)[0]
    _, reached = subset_product.states[start]
    local = component_product(subset_product, start, BreakpointState(reached, 1, 0),
                              breakpoint_step(ngba), component.enabled)
    verdict = breakpoint_verdict(local)
    logger.debug(f"breakpoint layer on component at {component.anchor}: {verdict.value}")
    return verdict, local
