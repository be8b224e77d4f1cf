# lazydet/graph.py
"""Graph decompositions over explicit product structures.

Every function works on a `TransitionGraph`: for each state a list of
actions, each action being the tuple of its successor states. A Markov
chain is the special case of at most one action per state; a state without
actions is absorbing.

Strongly connected components are computed with an iterative version of
Tarjan's algorithm driven by an explicit recursion stack.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

__all__ = [
    "TransitionGraph",
    "Component",
    "tarjan_sccs",
    "bsccs",
    "mecs",
    "prob1_reach",
    "can_reach",
    "reachable",
    "safe_states",
]

Enabled = Mapping[int, Iterable[int]]


@dataclass
class TransitionGraph:
    choices: List[List[Tuple[int, ...]]]

    @property
    def num_states(self) -> int:
        return len(self.choices)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Iterable[int]]) -> "TransitionGraph":
        """Markov-chain shaped graph: one action per state with successors"""
        choices = []
        for successors in adjacency:
            successors = tuple(sorted(set(successors)))
            choices.append([successors] if successors else [])
        return cls(choices)

    def actions(self, state: int, enabled: Optional[Enabled] = None) -> List[int]:
        if enabled is None:
            return list(range(len(self.choices[state])))
        return sorted(enabled.get(state, ()))

    def successors(self, state: int, enabled: Optional[Enabled] = None) -> List[int]:
        found: Set[int] = set()
        for action in self.actions(state, enabled):
            found.update(self.choices[state][action])
        return sorted(found)


@dataclass(frozen=True)
class Component:
    states: FrozenSet[int]
    enabled: Optional[Mapping[int, FrozenSet[int]]] = None

    @property
    def anchor(self) -> int:
        return min(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, state: int) -> bool:
        return state in self.states


class _SccComputation:
    BEGIN, CONTINUE, RETURN = 0, 1, 2  # "recursion" handling

    def __init__(self, adjacency: Mapping[int, Sequence[int]]):
        self.graph = adjacency
        self.indices: Dict[int, int] = {}
        self.lowlinks: Dict[int, int] = {}
        self.on_stack: Set[int] = set()
        self.stack: List[int] = []
        self.result: List[List[int]] = []
        self.current_index = 0

    def run(self, roots: Iterable[int]) -> List[List[int]]:
        for root in roots:
            if root not in self.indices:
                self._visit(root)
        return self.result

    def _visit(self, root: int) -> None:
        iter_stack = [(root, None, None, self.BEGIN)]
        while iter_stack:
            v, w, succ_index, state = iter_stack.pop()
            if state == self.BEGIN:
                self.indices[v] = self.lowlinks[v] = self.current_index
                self.current_index += 1
                self.stack.append(v)
                self.on_stack.add(v)
                iter_stack.append((v, None, 0, self.CONTINUE))
            elif state == self.CONTINUE:
                successors = self.graph[v]
                if succ_index == len(successors):
                    if self.lowlinks[v] == self.indices[v]:
                        component = []
                        while True:
                            w = self.stack.pop()
                            self.on_stack.discard(w)
                            component.append(w)
                            if w == v:
                                break
                        self.result.append(sorted(component))
                else:
                    w = successors[succ_index]
                    if w not in self.indices:
                        iter_stack.append((v, w, succ_index, self.RETURN))
                        iter_stack.append((w, None, None, self.BEGIN))
                    else:
                        if w in self.on_stack:
                            self.lowlinks[v] = min(self.lowlinks[v], self.indices[w])
                        iter_stack.append((v, None, succ_index + 1, self.CONTINUE))
            else:
                self.lowlinks[v] = min(self.lowlinks[v], self.lowlinks[w])
                iter_stack.append((v, None, succ_index + 1, self.CONTINUE))


def tarjan_sccs(adjacency: Mapping[int, Sequence[int]], roots: Optional[Iterable[int]] = None) -> List[List[int]]:
    """SCCs of the part of the graph reachable from `roots`.

    `adjacency` maps (or indexes) every node to its successors. The blocks
    come out in reverse topological order of the condensation."""
    if roots is None:
        roots = range(len(adjacency)) if isinstance(adjacency, Sequence) else sorted(adjacency)
    return _SccComputation(adjacency).run(roots)


def bsccs(graph: TransitionGraph) -> List[Component]:
    """Bottom SCCs, ignoring states without moves"""
    adjacency = [graph.successors(s) for s in range(graph.num_states)]
    found = []
    for block in tarjan_sccs(adjacency):
        members = frozenset(block)
        if all(adjacency[s] and members.issuperset(adjacency[s]) for s in block):
            found.append(Component(members))
    found.sort(key=lambda c: c.anchor)
    return found


def mecs(graph: TransitionGraph, states: Optional[Iterable[int]] = None,
         enabled: Optional[Enabled] = None) -> List[Component]:
    """Maximal end components by iterated SCC refinement.

    `states` and `enabled` restrict the search to a sub-MDP."""
    remaining = set(range(graph.num_states)) if states is None else set(states)
    allowed: Dict[int, Set[int]] = {s: set(graph.actions(s, enabled)) for s in remaining}

    while True:
        changed = False
        pruning = True
        while pruning:
            pruning = False
            for s in list(remaining):
                for a in list(allowed[s]):
                    if not remaining.issuperset(graph.choices[s][a]):
                        allowed[s].discard(a)
                if not allowed[s]:
                    remaining.discard(s)
                    pruning = changed = True
        # every kept action stays inside `remaining`
        adjacency = {s: graph.successors(s, allowed) for s in remaining}
        scc_of: Dict[int, int] = {}
        for index, block in enumerate(tarjan_sccs(adjacency, sorted(remaining))):
            for s in block:
                scc_of[s] = index
        for s in remaining:
            for a in list(allowed[s]):
                if any(scc_of.get(t) != scc_of[s] for t in graph.choices[s][a]):
                    allowed[s].discard(a)
                    changed = True
        if not changed:
            break

    blocks: Dict[int, Set[int]] = {}
    for s in remaining:
        blocks.setdefault(scc_of[s], set()).add(s)
    found = [
        Component(frozenset(block), {s: frozenset(allowed[s]) for s in block})
        for block in blocks.values()
    ]
    found.sort(key=lambda c: c.anchor)
    return found


def prob1_reach(graph: TransitionGraph, target: Iterable[int],
                enabled: Optional[Enabled] = None) -> Set[int]:
    """States from which some scheduler reaches `target` almost surely.

    With one action per state this is plain almost-sure reachability."""
    target = set(target)
    universe = set(range(graph.num_states))
    while True:
        region = set(target)
        frontier = True
        while frontier:
            frontier = False
            for s in universe - region:
                for a in graph.actions(s, enabled):
                    successors = graph.choices[s][a]
                    if universe.issuperset(successors) and region.intersection(successors):
                        region.add(s)
                        frontier = True
                        break
        if region == universe:
            return universe
        universe = region


def can_reach(graph: TransitionGraph, target: Iterable[int],
              enabled: Optional[Enabled] = None) -> Set[int]:
    """States with a path into `target`"""
    predecessors: Dict[int, Set[int]] = {}
    for s in range(graph.num_states):
        for t in graph.successors(s, enabled):
            predecessors.setdefault(t, set()).add(s)
    found = set(target)
    worklist = list(found)
    while worklist:
        t = worklist.pop()
        for s in predecessors.get(t, ()):
            if s not in found:
                found.add(s)
                worklist.append(s)
    return found


def reachable(graph: TransitionGraph, sources: Iterable[int],
              enabled: Optional[Enabled] = None) -> Set[int]:
    found = set(sources)
    worklist = list(found)
    while worklist:
        s = worklist.pop()
        for t in graph.successors(s, enabled):
            if t not in found:
                found.add(t)
                worklist.append(t)
    return found


def safe_states(graph: TransitionGraph, candidate: Iterable[int],
                enabled: Optional[Enabled] = None) -> Tuple[Set[int], Dict[int, FrozenSet[int]]]:
    """Greatest subset in which every state keeps an action staying inside.

    Returns the subset and the actions that stay inside it."""
    region = set(candidate)
    while True:
        keep = {
            s for s in region
            if any(region.issuperset(graph.choices[s][a]) for a in graph.actions(s, enabled))
        }
        if keep == region:
            break
        region = keep
    staying = {
        s: frozenset(a for a in graph.actions(s, enabled) if region.issuperset(graph.choices[s][a]))
        for s in region
    }
    return region, staying
