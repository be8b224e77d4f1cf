# lazydet/product.py
"""Products of Markov models with deterministic automata.

A product state is a pair (model state, automaton state); every product
transition carries the mark of the automaton transition it follows. When
the automaton blocks, the probability goes to a single absorbing sink so
that rows stay stochastic.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import (Any, Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List,
                    Mapping, Optional, Sequence, Set, Tuple)

from .automata import AcceptanceKind, NGBA
from .graph import Component, TransitionGraph, bsccs, mecs
from .models import MarkovModel
from .subset import SubsetAutomaton

logger = logging.getLogger(__name__)

SINK = (-1, None)

Step = Callable[[Hashable, int], Optional[Tuple[Hashable, Any]]]


@dataclass(frozen=True)
class ProductChoice:
    action: int
    targets: Tuple[Tuple[int, float, Any], ...]


class ProductModel:
    def __init__(self, model: MarkovModel, automaton: Any = None,
                 kind: Optional[AcceptanceKind] = None, num_marks: int = 0):
        self.model = model
        self.automaton = automaton
        self.kind = kind
        self.num_marks = num_marks
        self.states: List[Tuple[int, Hashable]] = []
        self.index: Dict[Tuple[int, Hashable], int] = {}
        self.choices: List[List[ProductChoice]] = []
        self.initial: Dict[int, float] = {}
        self.sink: Optional[int] = None
        self.symbols: Optional[List[int]] = None
        self._graph: Optional[TransitionGraph] = None

    @property
    def is_mdp(self) -> bool:
        return self.model.is_mdp

    @property
    def num_states(self) -> int:
        return len(self.states)

    def add_state(self, state: Tuple[int, Hashable]) -> Tuple[int, bool]:
        if state in self.index:
            return self.index[state], False
        self.index[state] = len(self.states)
        self.states.append(state)
        self.choices.append([])
        self._graph = None
        return self.index[state], True

    def sink_state(self) -> int:
        if self.sink is None:
            self.sink, _ = self.add_state(SINK)
        return self.sink

    def model_state(self, s: int) -> int:
        return self.states[s][0]

    def automaton_state(self, s: int) -> Hashable:
        return self.states[s][1]

    def distributions(self, s: int) -> List[List[Tuple[int, float]]]:
        return [[(t, p) for t, p, _ in choice.targets] for choice in self.choices[s]]

    def graph(self) -> TransitionGraph:
        if self._graph is None:
            self._graph = TransitionGraph([
                [tuple(sorted({t for t, _, _ in choice.targets})) for choice in self.choices[s]]
                for s in range(self.num_states)
            ])
        return self._graph

    def internal_edges(self, component: Component) -> Iterator[Tuple[int, int, int, Any]]:
        """(source, product action, target, mark) of the edges inside a component"""
        graph = self.graph()
        for s in sorted(component.states):
            for a in graph.actions(s, component.enabled):
                for t, _, mark in self.choices[s][a].targets:
                    if t in component.states:
                        yield s, a, t, mark

    def components(self, states: Optional[Iterable[int]] = None,
                   enabled: Optional[Mapping[int, Iterable[int]]] = None) -> List[Component]:
        """BSCCs of a chain product, MECs of an MDP product"""
        if self.is_mdp:
            return mecs(self.graph(), states, enabled)
        return bsccs(self.graph())


def explore_product(model: MarkovModel, symbols: Sequence[int], start: Iterable[Tuple[int, Hashable, float]],
                    step: Step, product: ProductModel,
                    allowed: Optional[Callable[[int, Hashable], Optional[Iterable[int]]]] = None) -> ProductModel:
    """Breadth-first construction of the reachable product.

    `start` lists (model state, automaton state, probability); an automaton
    state of None sends the mass straight to the sink. `allowed` restricts the
    model actions available at a product state."""
    queue = deque()
    for m, d, probability in start:
        if d is None:
            s = product.sink_state()
        else:
            s, new = product.add_state((m, d))
            if new:
                queue.append(s)
        product.initial[s] = product.initial.get(s, 0.0) + probability

    while queue:
        s = queue.popleft()
        m, d = product.states[s]
        permitted = None if allowed is None else allowed(m, d)
        for action, distribution in enumerate(model.distributions(m)):
            if permitted is not None and action not in permitted:
                continue
            targets = []
            lost = 0.0
            for m2, probability in distribution:
                result = step(d, symbols[m2])
                if result is None:
                    lost += probability
                    continue
                d2, mark = result
                t, new = product.add_state((m2, d2))
                if new:
                    queue.append(t)
                targets.append((t, probability, mark))
            if lost > 0:
                targets.append((product.sink_state(), lost, None))
            product.choices[s].append(ProductChoice(action, tuple(targets)))
    logger.debug(f"product with {product.num_states} states")
    return product


def product(model: MarkovModel, automaton) -> ProductModel:
    """M ⊗ A for a (possibly lazy) deterministic automaton.

    The initial automaton state of model state m is T(q0, L(m))."""
    symbols = model.label_symbols(automaton.alphabet)
    start = []
    for m, probability in model.initial_items():
        first = automaton.step(automaton.initial, symbols[m])
        start.append((m, None if first is None else first[0], probability))
    result = ProductModel(model, automaton, automaton.kind, 0)
    result.symbols = symbols
    explore_product(model, symbols, start, automaton.step, result)
    result.num_marks = automaton.num_marks
    return result


def product_subset(model: MarkovModel, ngba: NGBA, subset: Optional[SubsetAutomaton] = None) -> ProductModel:
    """M × S; marks are (F^o bits, F^u bits) pairs.

    Automaton states are the subsets themselves (bit masks)."""
    subset = subset or SubsetAutomaton(ngba)
    symbols = model.label_symbols(ngba.alphabet)

    def step(mask: int, symbol: int):
        edge = subset.step(mask, symbol)
        return None if edge is None else (edge.target, (edge.over, edge.under))

    start = []
    for m, probability in model.initial_items():
        first = step(subset.initial, symbols[m])
        start.append((m, None if first is None else first[0], probability))
    result = ProductModel(model, subset)
    result.symbols = symbols
    return explore_product(model, symbols, start, step, result)


def component_product(subset_product: ProductModel, start: int, automaton_start: Hashable, step: Step,
                      enabled: Optional[Mapping[int, Iterable[int]]] = None,
                      mark: Callable[[Any], Any] = lambda m: m,
                      kind: AcceptanceKind = AcceptanceKind.RABIN) -> ProductModel:
    """Product started at (m, automaton_start) for a state (m, R) of the
    subset product, restricted to the actions of a component.

    Local states are (m, (R, d)): the subset state is carried along so
    that the component restriction applies at every local state."""
    model = subset_product.model
    symbols = subset_product.symbols
    subset = subset_product.automaton
    m, anchor = subset_product.states[start]

    def local_step(state, symbol):
        reached, inner = state
        edge = subset.step(reached, symbol)
        result = step(inner, symbol)
        if edge is None or result is None:
            return None
        return (edge.target, result[0]), mark(result[1])

    allowed = None
    if enabled is not None:
        def allowed(m2: int, state) -> FrozenSet[int]:
            s = subset_product.index.get((m2, state[0]))
            if s is None or s not in enabled:
                return frozenset()
            return frozenset(subset_product.choices[s][a].action for a in enabled[s])

    local = ProductModel(model, None, kind)
    local.symbols = symbols
    return explore_product(model, symbols, [(m, (anchor, automaton_start), 1.0)], local_step, local, allowed)


def _rabin_view(kind: AcceptanceKind, mark: Any, priorities: Sequence[int]) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Marks as (accepting pairs, rejecting pairs).

    A min-even parity condition is the Rabin condition with one pair per
    even priority p: accept on p, reject below p."""
    if mark is None:
        return frozenset(), frozenset()
    if kind is AcceptanceKind.RABIN:
        return mark.accepting, mark.rejecting
    accepting = frozenset({mark}) if mark % 2 == 0 else frozenset()
    return accepting, frozenset(p for p in priorities if p > mark)


def accepting_components(product_model: ProductModel, pairs: Optional[Iterable[int]] = None) -> List[Component]:
    """Accepting BSCCs (chains) or accepting end components (MDPs).

    For Rabin and parity MDPs the result holds, per pair, the MECs left after
    dropping every state-action with a rejecting edge that still contain an
    accepting edge; their union is the accepting region."""
    kind = product_model.kind
    graph = product_model.graph()
    if kind is AcceptanceKind.BUCHI:
        needed = frozenset(range(product_model.num_marks))
        found = []
        for component in product_model.components():
            seen: Set[int] = set()
            for _, _, _, mark in product_model.internal_edges(component):
                seen.update(mark or ())
            if seen >= needed:
                found.append(component)
        return found

    priorities: List[int] = []
    if kind is AcceptanceKind.PARITY:
        priorities = sorted({mark for s in range(product_model.num_states)
                             for choice in product_model.choices[s]
                             for _, _, mark in choice.targets
                             if mark is not None and mark % 2 == 0})
    wanted = None if pairs is None else frozenset(pairs)

    def view(mark):
        accepting, rejecting = _rabin_view(kind, mark, priorities)
        if wanted is not None:
            accepting = accepting & wanted
        return accepting, rejecting

    if not product_model.is_mdp:
        found = []
        for component in bsccs(graph):
            hit: Set[int] = set()
            blocked: Set[int] = set()
            for _, _, _, mark in product_model.internal_edges(component):
                accepting, rejecting = view(mark)
                hit |= accepting
                blocked |= rejecting
            if hit - blocked:
                found.append(component)
        return found

    candidates: Set[int] = set()
    for s in range(product_model.num_states):
        for choice in product_model.choices[s]:
            for _, _, mark in choice.targets:
                candidates |= view(mark)[0]
    found = []
    for pair in sorted(candidates):
        enabled = {
            s: frozenset(a for a, choice in enumerate(product_model.choices[s])
                         if not any(pair in view(mark)[1] for _, _, mark in choice.targets))
            for s in range(product_model.num_states)
        }
        for component in mecs(graph, enabled=enabled):
            if any(pair in view(mark)[0] for _, _, _, mark in product_model.internal_edges(component)):
                found.append(component)
    return found

