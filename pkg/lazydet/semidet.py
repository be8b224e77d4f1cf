# lazydet/semidet.py
"""Semi-determinisation and its parity determinisation.

SD(B) runs the subset automaton (accepting nothing) until it guesses a
moment to jump into a breakpoint automaton started from any sub-subset of
the current successors; from then on it is deterministic and accepts on
breakpoints.

The parity automaton keeps the subset state r together with an ordered
list f of breakpoint states, one per jump that is still alive.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

from .automata import AcceptanceKind, LazyDeterministicAutomaton, NGBA, format_mask
from .breakpoint import BreakpointState, BreakpointStep, bp_successor
from .subset import SubsetAutomaton

logger = logging.getLogger(__name__)


def submasks(mask: int) -> List[int]:
    """Non-empty subsets of a bit set, ascending"""
    found = []
    sub = mask
    while sub:
        found.append(sub)
        sub = (sub - 1) & mask
    return sorted(found)


def all_transit_targets(ngba: NGBA, reached: int) -> List[BreakpointState]:
    """Every breakpoint state a jump into the successor set `reached` may
    enter, in (R, j, C) order. Exponential in |reached|."""
    targets = []
    for sub in submasks(reached):
        for j in range(1, ngba.k + 1):
            targets.append(BreakpointState(sub, j, 0))
            targets.extend(BreakpointState(sub, j, c) for c in submasks(sub) if c != sub)
    return sorted(targets)


class SemiDetAutomaton:
    def __init__(self, ngba: NGBA):
        self.ngba = ngba
        self.subset = SubsetAutomaton(ngba).explore()

    @property
    def k(self) -> int:
        return self.ngba.k

    @property
    def num_final_states(self) -> int:
        """|Q_f|: all valid (R, j, C) triples"""
        n = self.ngba.num_states
        return self.k * (3 ** n - 2 ** n)

    @property
    def initial(self) -> int:
        return self.subset.initial

    def initial_step(self, mask: int, symbol: int) -> Optional[int]:
        edge = self.subset.step(mask, symbol)
        return None if edge is None else edge.target

    def final_step(self, state: BreakpointState, symbol: int) -> Optional[BreakpointStep]:
        return bp_successor(state, symbol, self.ngba)

    def has_transit(self, mask: int, symbol: int, target: BreakpointState) -> bool:
        reached = self.ngba.post(mask, symbol)
        return target.is_valid(self.ngba) and not target.reached & ~reached

    def final_states(self) -> Iterator[BreakpointState]:
        """Breakpoint states reachable through a transit, closed under T_f"""
        seen = set()
        frontier: List[BreakpointState] = []
        for mask in self.subset.states:
            for symbol in self.ngba.alphabet.symbols():
                for target in all_transit_targets(self.ngba, self.ngba.post(mask, symbol)):
                    if target not in seen:
                        seen.add(target)
                        frontier.append(target)
        while frontier:
            state = frontier.pop()
            yield state
            for symbol in self.ngba.alphabet.symbols():
                result = self.final_step(state, symbol)
                if result is not None and result.state not in seen:
                    seen.add(result.state)
                    frontier.append(result.state)

    def to_ngba(self) -> NGBA:
        """SD(B) as a Büchi automaton: subset states first, then the final part"""
        alphabet = self.ngba.alphabet
        names = self.ngba.state_names
        initial_part = list(self.subset.states)
        final_part = sorted(self.final_states())
        index: Dict[object, int] = {('i', mask): q for q, mask in enumerate(initial_part)}
        for state in final_part:
            index[('f', state)] = len(index)

        transitions = set()
        accepting = set()
        for mask in initial_part:
            source = index[('i', mask)]
            for symbol in alphabet.symbols():
                target = self.initial_step(mask, symbol)
                if target is None:
                    continue
                transitions.add((source, symbol, index[('i', target)]))
                for state in all_transit_targets(self.ngba, self.ngba.post(mask, symbol)):
                    transitions.add((source, symbol, index[('f', state)]))
        for state in final_part:
            source = index[('f', state)]
            for symbol in alphabet.symbols():
                result = self.final_step(state, symbol)
                if result is None:
                    continue
                edge = (source, symbol, index[('f', result.state)])
                transitions.add(edge)
                if result.accepting:
                    accepting.add(edge)

        labels = [format_mask(mask, names) for mask in initial_part] + [s.format(self.ngba) for s in final_part]
        logger.debug(f"semi-deterministic automaton: {len(initial_part)} + {len(final_part)} states")
        return NGBA(alphabet, len(index), frozenset({0}), frozenset(transitions),
                    (frozenset(accepting),), tuple(labels))


def build_semidet(ngba: NGBA) -> SemiDetAutomaton:
    return SemiDetAutomaton(ngba)


class ParityState(NamedTuple):
    subset: Optional[int]
    breakpoints: Tuple[BreakpointState, ...]

    def format(self, ngba: NGBA) -> str:
        r = "␣" if self.subset is None else format_mask(self.subset, ngba.state_names)
        f = ",".join(s.format(ngba) for s in self.breakpoints)
        return f"({r},[{f}])"


@dataclass(frozen=True)
class ParityStep:
    state: ParityState
    priority: int
    accepting_index: int
    blank_index: int


def parity_successor(sd: SemiDetAutomaton, state: ParityState, symbol: int,
                     transits: Optional[Dict[int, List[BreakpointState]]] = None) -> ParityStep:
    """One step of D(SD). `transits` caches the jump targets per successor set."""
    limit = sd.num_final_states + 1
    r = state.subset
    r2 = None if r is None else sd.initial_step(r, symbol)

    moved: List[Optional[BreakpointState]] = []
    accepting_index = limit
    for position, source in enumerate(state.breakpoints, start=1):
        result = sd.final_step(source, symbol)
        if result is None:
            moved.append(None)
            continue
        moved.append(result.state)
        if result.accepting and accepting_index == limit:
            accepting_index = position

    seen = set()
    deduplicated: List[Optional[BreakpointState]] = []
    for target in moved:
        if target is None or target in seen:
            deduplicated.append(None)
        else:
            seen.add(target)
            deduplicated.append(target)
    blank_index = next((i for i, t in enumerate(deduplicated, start=1) if t is None), limit)

    breakpoints = [t for t in deduplicated if t is not None]
    if r is not None and r2 is not None:
        reached = sd.ngba.post(r, symbol)
        transits = {} if transits is None else transits
        if reached not in transits:
            transits[reached] = all_transit_targets(sd.ngba, reached)
        breakpoints.extend(t for t in transits[reached] if t not in seen)

    if blank_index <= accepting_index:
        priority = 2 * blank_index - 1
    else:
        priority = 2 * accepting_index
    return ParityStep(ParityState(r2, tuple(breakpoints)), priority, accepting_index, blank_index)


def determinise_parity(sd: SemiDetAutomaton) -> LazyDeterministicAutomaton:
    """D(SD), explored on demand; `materialize()` gives the explicit automaton"""
    transits: Dict[int, List[BreakpointState]] = {}

    def successor(state: ParityState, symbol: int):
        result = parity_successor(sd, state, symbol, transits)
        return result.state, result.priority

    initial = ParityState(sd.initial, ())
    return LazyDeterministicAutomaton(sd.ngba.alphabet, initial, successor, AcceptanceKind.PARITY,
                                      2 * sd.num_final_states + 1)
