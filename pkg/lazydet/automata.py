# lazydet/automata.py
"""Core ω-automata types and membership oracles for ultimately periodic words.

Symbols are valuations of the atomic propositions encoded as bit vectors:
bit i of a symbol is set iff proposition i holds. State sets are encoded the
same way over state indices, which keeps the subset, breakpoint and history
tree constructions down to integer operations.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import (Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping,
                    Optional, Sequence, Tuple)

from .exceptions import AlphabetError, InputError, UnsupportedAutomatonError
from .graph import tarjan_sccs

logger = logging.getLogger(__name__)

MAX_PROPOSITIONS = 16

Transition = Tuple[int, int, int]


def mask_of(states: Iterable[int]) -> int:
    mask = 0
    for q in states:
        mask |= 1 << q
    return mask


def states_of(mask: int) -> List[int]:
    """State indices of a bit set, ascending"""
    found = []
    while mask:
        low = mask & -mask
        found.append(low.bit_length() - 1)
        mask ^= low
    return found


def format_mask(mask: int, names: Optional[Sequence[str]] = None) -> str:
    members = states_of(mask)
    if names is not None:
        return "{" + ",".join(names[q] for q in members) + "}"
    return "{" + ",".join(str(q) for q in members) + "}"


@dataclass(frozen=True)
class Alphabet:
    propositions: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, 'propositions', tuple(self.propositions))
        if len(self.propositions) > MAX_PROPOSITIONS:
            raise UnsupportedAutomatonError(
                f"{len(self.propositions)} atomic propositions given, at most {MAX_PROPOSITIONS} supported")
        if len(set(self.propositions)) != len(self.propositions):
            raise AlphabetError(f"duplicate atomic propositions in {self.propositions}")

    @property
    def size(self) -> int:
        return 1 << len(self.propositions)

    def symbols(self) -> range:
        return range(self.size)

    def symbol_of(self, props: Iterable[str]) -> int:
        """Encode a set of true propositions, all of which must be known"""
        symbol = 0
        for name in props:
            if name not in self.propositions:
                raise AlphabetError(f"unknown atomic proposition '{name}'")
            symbol |= 1 << self.propositions.index(name)
        return symbol

    def project(self, props: Iterable[str]) -> int:
        """Encode a set of propositions, dropping the ones outside the alphabet"""
        return self.symbol_of(p for p in props if p in self.propositions)

    def props_of(self, symbol: int) -> FrozenSet[str]:
        self.check(symbol)
        return frozenset(p for i, p in enumerate(self.propositions) if symbol >> i & 1)

    def format_symbol(self, symbol: int) -> str:
        return "{" + ",".join(p for i, p in enumerate(self.propositions) if symbol >> i & 1) + "}"

    def check(self, symbol: int) -> None:
        if not 0 <= symbol < self.size:
            raise AlphabetError(f"symbol {symbol} outside alphabet over {list(self.propositions)}")


@dataclass(frozen=True)
class NGBA:
    """Nondeterministic automaton with transition-based generalized Büchi acceptance."""
    alphabet: Alphabet
    num_states: int
    initial: FrozenSet[int]
    transitions: FrozenSet[Transition]
    accepting_sets: Tuple[FrozenSet[Transition], ...]
    state_names: Optional[Tuple[str, ...]] = None
    _succ: Dict[Tuple[int, int], int] = field(init=False, repr=False, compare=False)
    _acc: Tuple[Dict[Tuple[int, int], int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'initial', frozenset(self.initial))
        object.__setattr__(self, 'transitions', frozenset(self.transitions))
        object.__setattr__(self, 'accepting_sets', tuple(frozenset(f) for f in self.accepting_sets))
        if not self.initial:
            raise InputError("an NGBA needs at least one initial state")
        if not self.accepting_sets:
            raise InputError("an NGBA needs at least one accepting set")
        if any(not 0 <= q < self.num_states for q in self.initial):
            raise InputError("initial state out of range")
        succ: Dict[Tuple[int, int], int] = {}
        for q, symbol, target in self.transitions:
            if not (0 <= q < self.num_states and 0 <= target < self.num_states):
                raise InputError(f"transition ({q}, {symbol}, {target}) mentions an unknown state")
            self.alphabet.check(symbol)
            succ[(q, symbol)] = succ.get((q, symbol), 0) | 1 << target
        acc = []
        for j, accepting in enumerate(self.accepting_sets):
            if not accepting <= self.transitions:
                raise InputError(f"accepting set {j} is not a subset of the transitions")
            table: Dict[Tuple[int, int], int] = {}
            for q, symbol, target in accepting:
                table[(q, symbol)] = table.get((q, symbol), 0) | 1 << target
            acc.append(table)
        object.__setattr__(self, '_succ', succ)
        object.__setattr__(self, '_acc', tuple(acc))

    @property
    def k(self) -> int:
        return len(self.accepting_sets)

    @property
    def initial_mask(self) -> int:
        return mask_of(self.initial)

    @property
    def all_states_mask(self) -> int:
        return (1 << self.num_states) - 1

    def post(self, mask: int, symbol: int) -> int:
        """T(R, σ) as a bit set"""
        result = 0
        succ = self._succ
        while mask:
            low = mask & -mask
            result |= succ.get((low.bit_length() - 1, symbol), 0)
            mask ^= low
        return result

    def post_accepting(self, mask: int, symbol: int, j: int) -> int:
        """F_j(R, σ): targets of accepting transitions of set j (0-based)"""
        result = 0
        table = self._acc[j]
        while mask:
            low = mask & -mask
            result |= table.get((low.bit_length() - 1, symbol), 0)
            mask ^= low
        return result

    def acceptance_bits(self, q: int, symbol: int, target: int) -> int:
        bits = 0
        for j, table in enumerate(self._acc):
            if table.get((q, symbol), 0) >> target & 1:
                bits |= 1 << j
        return bits

    def state_name(self, q: int) -> str:
        return self.state_names[q] if self.state_names else str(q)

    def format_states(self, mask: int) -> str:
        return format_mask(mask, self.state_names)

    def with_initial(self, states: Iterable[int]) -> "NGBA":
        return NGBA(self.alphabet, self.num_states, frozenset(states), self.transitions,
                    self.accepting_sets, self.state_names)

    def renumbered(self, permutation: Sequence[int]) -> "NGBA":
        """Isomorphic copy with state q renamed to permutation[q]"""
        def move(t: Transition) -> Transition:
            return permutation[t[0]], t[1], permutation[t[2]]

        names = None
        if self.state_names:
            inverse = {permutation[q]: q for q in range(self.num_states)}
            names = tuple(self.state_names[inverse[q]] for q in range(self.num_states))
        return NGBA(self.alphabet, self.num_states,
                    frozenset(permutation[q] for q in self.initial),
                    frozenset(move(t) for t in self.transitions),
                    tuple(frozenset(move(t) for t in f) for f in self.accepting_sets),
                    names)

    def is_deterministic(self) -> bool:
        if len(self.initial) != 1:
            return False
        return all(mask & (mask - 1) == 0 for mask in self._succ.values())

    def sorted_transitions(self) -> List[Transition]:
        return sorted(self.transitions)


class AcceptanceKind(Enum):
    BUCHI = 'Buchi'
    RABIN = 'Rabin'
    PARITY = 'parity'


@dataclass(frozen=True)
class RabinMark:
    accepting: FrozenSet[int] = frozenset()
    rejecting: FrozenSet[int] = frozenset()


def cycle_accepting(kind: AcceptanceKind, num_marks: int, marks: Iterable[Any]) -> bool:
    """Acceptance of a run whose transitions seen infinitely often carry `marks`"""
    marks = list(marks)
    if not marks:
        return False
    if kind is AcceptanceKind.BUCHI:
        seen = frozenset().union(*marks)
        return seen.issuperset(range(num_marks))
    if kind is AcceptanceKind.RABIN:
        accepting = frozenset().union(*(m.accepting for m in marks))
        rejecting = frozenset().union(*(m.rejecting for m in marks))
        return bool(accepting - rejecting)
    return min(marks) % 2 == 0


@dataclass(frozen=True)
class DeterministicAutomaton:
    """Deterministic automaton with a partial transition function.

    Transition marks depend on `kind`: a frozenset of set indices for
    (generalized) Büchi, a `RabinMark` for Rabin and an int priority for
    min-even parity acceptance."""
    alphabet: Alphabet
    num_states: int
    initial: int
    transitions: Mapping[Tuple[int, int], Tuple[int, Any]]
    kind: AcceptanceKind
    num_marks: int
    state_labels: Optional[Tuple[Any, ...]] = None

    def step(self, q: int, symbol: int) -> Optional[Tuple[int, Any]]:
        return self.transitions.get((q, symbol))

    def accepts_cycle(self, marks: Iterable[Any]) -> bool:
        return cycle_accepting(self.kind, self.num_marks, marks)

    def edges(self) -> List[Tuple[int, int, int, Any]]:
        """(source, symbol, target, mark) in source/symbol order"""
        return [(q, symbol, target, mark)
                for (q, symbol), (target, mark) in sorted(self.transitions.items(), key=lambda e: e[0])]

    def as_ngba(self) -> NGBA:
        if self.kind is not AcceptanceKind.BUCHI:
            raise UnsupportedAutomatonError(f"{self.kind.value} automaton has no NGBA view")
        transitions = frozenset((q, s, t) for q, s, t, _ in self.edges())
        accepting = tuple(frozenset((q, s, t) for q, s, t, mark in self.edges() if j in mark)
                          for j in range(self.num_marks))
        return NGBA(self.alphabet, self.num_states, frozenset({self.initial}), transitions, accepting)


class LazyDeterministicAutomaton:
    """Deterministic automaton explored on demand from a successor function.

    States are arbitrary hashable objects numbered in discovery order, so the
    numbering is reproducible for a fixed exploration order."""

    def __init__(self, alphabet: Alphabet, initial_state: Hashable,
                 successor: Callable[[Hashable, int], Optional[Tuple[Hashable, Any]]],
                 kind: AcceptanceKind, num_marks: Any = 0):
        self.alphabet = alphabet
        self.kind = kind
        self._num_marks = num_marks
        self._successor = successor
        self.states: List[Hashable] = [initial_state]
        self.index: Dict[Hashable, int] = {initial_state: 0}
        self._memo: Dict[Tuple[int, int], Optional[Tuple[int, Any]]] = {}

    initial = 0

    @property
    def num_marks(self) -> int:
        return self._num_marks() if callable(self._num_marks) else self._num_marks

    @property
    def num_states(self) -> int:
        return len(self.states)

    def state(self, q: int) -> Hashable:
        return self.states[q]

    def number(self, state: Hashable) -> int:
        if state not in self.index:
            self.index[state] = len(self.states)
            self.states.append(state)
        return self.index[state]

    def step(self, q: int, symbol: int) -> Optional[Tuple[int, Any]]:
        key = (q, symbol)
        if key not in self._memo:
            result = self._successor(self.states[q], symbol)
            self._memo[key] = None if result is None else (self.number(result[0]), result[1])
        return self._memo[key]

    def accepts_cycle(self, marks: Iterable[Any]) -> bool:
        return cycle_accepting(self.kind, self.num_marks, marks)

    def materialize(self, max_states: Optional[int] = None) -> DeterministicAutomaton:
        """Explore the whole reachable fragment"""
        frontier = 0
        while frontier < len(self.states):
            if max_states is not None and len(self.states) > max_states:
                raise InputError(f"automaton exceeds {max_states} states")
            for symbol in self.alphabet.symbols():
                self.step(frontier, symbol)
            frontier += 1
        transitions = {key: value for key, value in self._memo.items() if value is not None}
        logger.debug(f"materialized {len(self.states)} states, {len(transitions)} transitions")
        return DeterministicAutomaton(self.alphabet, len(self.states), 0, transitions,
                                      self.kind, self.num_marks, tuple(self.states))


@dataclass(frozen=True)
class LassoWord:
    prefix: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'prefix', tuple(self.prefix))
        object.__setattr__(self, 'period', tuple(self.period))
        if not self.period:
            raise InputError("the period of a lasso word must not be empty")

    @classmethod
    def from_letters(cls, alphabet: Alphabet, prefix: Sequence[Iterable[str]],
                     period: Sequence[Iterable[str]]) -> "LassoWord":
        """Build from letters given as collections of true propositions"""
        return cls(tuple(alphabet.symbol_of(letter) for letter in prefix),
                   tuple(alphabet.symbol_of(letter) for letter in period))

    def __len__(self) -> int:
        return len(self.prefix) + len(self.period)

    def symbol_at(self, position: int) -> int:
        if position < len(self.prefix):
            return self.prefix[position]
        return self.period[position - len(self.prefix)]

    def next_position(self, position: int) -> int:
        position += 1
        return position if position < len(self) else len(self.prefix)

    def check(self, alphabet: Alphabet) -> None:
        for symbol in self.prefix + self.period:
            alphabet.check(symbol)


def lasso_member_ngba(automaton: NGBA, word: LassoWord) -> bool:
    """Whether u·v^ω is accepted, by cycle search over positions × states"""
    word.check(automaton.alphabet)
    n = automaton.num_states
    full = (1 << automaton.k) - 1
    edges: Dict[int, List[Tuple[int, int]]] = {}
    roots = [q for q in sorted(automaton.initial)]
    worklist = list(roots)
    seen = set(roots)
    while worklist:
        node = worklist.pop()
        position, q = divmod(node, n)
        symbol = word.symbol_at(position)
        following = word.next_position(position)
        out = []
        for target in states_of(automaton.post(1 << q, symbol)):
            succ = following * n + target
            out.append((succ, automaton.acceptance_bits(q, symbol, target)))
            if succ not in seen:
                seen.add(succ)
                worklist.append(succ)
        edges[node] = out

    adjacency = {node: [succ for succ, _ in out] for node, out in edges.items()}
    for block in tarjan_sccs(adjacency, roots):
        members = set(block)
        seen_bits = 0
        internal = False
        for node in block:
            for succ, bits in edges[node]:
                if succ in members:
                    internal = True
                    seen_bits |= bits
        if internal and seen_bits == full:
            return True
    return False


def lasso_run_marks(automaton, word: LassoWord) -> Optional[List[Any]]:
    """Marks of the transitions on the cycle of the unique run, None if it blocks"""
    word.check(automaton.alphabet)
    q, position = automaton.initial, 0
    visited: Dict[Tuple[int, int], int] = {}
    marks: List[Any] = []
    while (position, q) not in visited:
        visited[(position, q)] = len(marks)
        step = automaton.step(q, word.symbol_at(position))
        if step is None:
            return None
        q, mark = step
        marks.append(mark)
        position = word.next_position(position)
    return marks[visited[(position, q)]:]


def lasso_run_deterministic(automaton, word: LassoWord) -> bool:
    """Membership of u·v^ω for a deterministic (possibly lazy) automaton"""
    marks = lasso_run_marks(automaton, word)
    if marks is None:
        return False
    return automaton.accepts_cycle(marks)
