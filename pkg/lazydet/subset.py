# lazydet/subset.py
"""Subset construction with over- and under-approximating acceptance.

For the transition (R, σ, R') and accepting set i:

* it is in F^o_i when some run from R reads σ through an i-accepting edge;
* it is in F^u_i when every state of R alone reaches all of R' through
  i-accepting edges.
"""

import logging
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from .automata import AcceptanceKind, DeterministicAutomaton, NGBA, format_mask, states_of

logger = logging.getLogger(__name__)


class Verdict(Enum):
    ACCEPTING = 'accepting'
    REJECTING = 'rejecting'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class SubsetEdge:
    target: int
    over: int
    under: int


class SubsetAutomaton:
    """Deterministic powerset automaton, explored lazily and memoized"""

    def __init__(self, ngba: NGBA):
        self.ngba = ngba
        self.initial = ngba.initial_mask
        self.states: List[int] = [self.initial]
        self.index: Dict[int, int] = {self.initial: 0}
        self._edges: Dict[Tuple[int, int], Optional[SubsetEdge]] = {}
        self._lock = threading.Lock()

    @property
    def num_states(self) -> int:
        return len(self.states)

    def step(self, mask: int, symbol: int) -> Optional[SubsetEdge]:
        key = (mask, symbol)
        edge = self._edges.get(key, ...)
        if edge is not ...:
            return edge
        with self._lock:
            if key not in self._edges:
                self._edges[key] = self._compute(mask, symbol)
            return self._edges[key]

    def _compute(self, mask: int, symbol: int) -> Optional[SubsetEdge]:
        ngba = self.ngba
        target = ngba.post(mask, symbol)
        if not target:
            return None
        over = under = 0
        for j in range(ngba.k):
            if ngba.post_accepting(mask, symbol, j):
                over |= 1 << j
            if all(ngba.post_accepting(1 << q, symbol, j) == target for q in states_of(mask)):
                under |= 1 << j
        if target not in self.index:
            self.index[target] = len(self.states)
            self.states.append(target)
        return SubsetEdge(target, over, under)

    def explore(self) -> "SubsetAutomaton":
        frontier = 0
        while frontier < len(self.states):
            mask = self.states[frontier]
            for symbol in self.ngba.alphabet.symbols():
                self.step(mask, symbol)
            frontier += 1
        logger.debug(f"subset automaton: {len(self.states)} states")
        return self

    def transitions(self) -> Iterator[Tuple[int, int, SubsetEdge]]:
        for (mask, symbol), edge in sorted(self._edges.items(), key=lambda e: e[0]):
            if edge is not None:
                yield mask, symbol, edge

    def format_state(self, mask: int) -> str:
        return format_mask(mask, self.ngba.state_names)

    def as_deterministic(self, under: bool = True) -> DeterministicAutomaton:
        """Büchi view using F^u (under) or F^o (over) as accepting sets"""
        self.explore()
        transitions = {}
        for mask, symbol, edge in self.transitions():
            bits = edge.under if under else edge.over
            mark = frozenset(j for j in range(self.ngba.k) if bits >> j & 1)
            transitions[(self.index[mask], symbol)] = (self.index[edge.target], mark)
        labels = tuple(self.format_state(mask) for mask in self.states)
        return DeterministicAutomaton(self.ngba.alphabet, len(self.states), 0, transitions,
                                      AcceptanceKind.BUCHI, self.ngba.k, labels)


def build_subset(ngba: NGBA) -> SubsetAutomaton:
    return SubsetAutomaton(ngba).explore()


def classify_component_subset(transitions: Iterable[Tuple[int, int, int]],
                              subset: SubsetAutomaton) -> Verdict:
    """Decide a component from its projected (R, σ, R') transitions when the
    approximations agree.

    Accepting when every F^u_i is hit, rejecting when some F^o_i is missed."""
    over = under = 0
    for mask, symbol, _ in transitions:
        edge = subset.step(mask, symbol)
        if edge is None:
            continue
        over |= edge.over
        under |= edge.under
    full = (1 << subset.ngba.k) - 1
    if under == full:
        return Verdict.ACCEPTING
    if over != full:
        return Verdict.REJECTING
    return Verdict.UNKNOWN
