# lazydet/ght.py
"""Rabin determinisation through generalized history trees.

A tree node is named by the tuple of child positions on the path from the
root, so the root is ``()`` and its second child ``(1,)``. Every node has
a non-empty label (a set of NGBA states) and an index h in 1..k naming
the accepting set the node currently waits for.

One step of the construction on symbol σ:

1. replace every label by its σ-successors;
2. give every node a new youngest child labelled with the successors
   through accepting set h(v) of its old label;
3. remove from every node the states held by older siblings;
4. mark nodes whose label equals the union of their children's labels as
   accepting, drop their descendants and advance h;
5. drop nodes with empty labels;
6. rename nodes so that children are numbered consecutively.

Each node name is a Rabin pair: accepting when the node is marked in step
4, rejecting when it is removed, renamed or created.
"""

import logging
import threading
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .automata import (AcceptanceKind, DeterministicAutomaton, LazyDeterministicAutomaton, NGBA,
                       RabinMark, format_mask)

logger = logging.getLogger(__name__)

Node = Tuple[int, ...]


def _children(names, v: Node) -> List[Node]:
    return sorted(u for u in names if len(u) == len(v) + 1 and u[:-1] == v)


def _is_descendant(u: Node, v: Node) -> bool:
    return len(u) > len(v) and u[:len(v)] == v


def format_node(v: Node) -> str:
    return "ε" if not v else "".join(str(i) for i in v)


@dataclass(frozen=True)
class GHT:
    """Nodes as (name, label, h) triples in preorder"""
    nodes: Tuple[Tuple[Node, int, int], ...]

    @classmethod
    def build(cls, labels: Dict[Node, int], h: Dict[Node, int]) -> "GHT":
        return cls(tuple((v, labels[v], h[v]) for v in sorted(labels)))

    @property
    def names(self) -> List[Node]:
        return [v for v, _, _ in self.nodes]

    @property
    def labels(self) -> Dict[Node, int]:
        return {v: label for v, label, _ in self.nodes}

    @property
    def indices(self) -> Dict[Node, int]:
        return {v: h for v, _, h in self.nodes}

    @property
    def reached(self) -> int:
        return self.nodes[0][1]

    def children(self, v: Node) -> List[Node]:
        return _children(self.names, v)

    def format(self, ngba: Optional[NGBA] = None) -> str:
        names = ngba.state_names if ngba is not None else None
        return " ".join(f"({format_node(v)},{format_mask(label, names)},{h})" for v, label, h in self.nodes)

    def check(self) -> None:
        """Tree shape and labelling invariants"""
        labels = self.labels
        assert self.nodes and self.nodes[0][0] == (), "root missing"
        for v, label, _ in self.nodes:
            assert label, f"empty label at {format_node(v)}"
            kids = self.children(v)
            assert [u[-1] for u in kids] == list(range(len(kids))), f"gap below {format_node(v)}"
            union = 0
            for u in kids:
                assert not labels[u] & ~label, f"child label exceeds parent at {format_node(u)}"
                assert not labels[u] & union, f"siblings overlap below {format_node(v)}"
                union |= labels[u]
            assert label & ~union, f"no private state at {format_node(v)}"
            if v:
                assert v[:-1] in labels, f"orphan {format_node(v)}"


@dataclass(frozen=True)
class GhtStep:
    tree: GHT
    accepting: FrozenSet[Node]
    rejecting: FrozenSet[Node]


def ght_initial(ngba: NGBA, reached: Optional[int] = None) -> GHT:
    label = ngba.initial_mask if reached is None else reached
    return GHT((((), label, 1),))


def ght_successor(tree: GHT, symbol: int, ngba: NGBA) -> Optional[GhtStep]:
    old = tree.labels
    if not ngba.post(old[()], symbol):
        return None
    h = tree.indices

    labels: Dict[Node, int] = {v: ngba.post(label, symbol) for v, label in old.items()}
    for v in sorted(old):
        child = v + (len(_children(old, v)),)
        labels[child] = ngba.post_accepting(old[v], symbol, h[v] - 1)
        h[child] = 1
    sprouted = set(labels)

    def steal(v: Node, forbidden: int) -> None:
        labels[v] &= ~forbidden
        taken = forbidden
        for child in _children(labels, v):
            steal(child, taken)
            taken |= labels[child]

    steal((), 0)

    accepting = set()
    for v in sorted(labels):
        if v not in labels:
            continue
        union = 0
        for child in _children(labels, v):
            union |= labels[child]
        if labels[v] and labels[v] == union:
            accepting.add(v)
            for u in [u for u in labels if _is_descendant(u, v)]:
                del labels[u]
            h[v] = h[v] % ngba.k + 1

    for v in [v for v, label in labels.items() if not label]:
        del labels[v]
    removed = sprouted - set(labels)

    renaming: Dict[Node, Node] = {(): ()}
    for v in sorted(labels):
        for position, child in enumerate(_children(labels, v)):
            renaming[child] = renaming[v] + (position,)
    renamed = {v for v, name in renaming.items() if name != v}
    new_labels = {renaming[v]: labels[v] for v in labels}
    new_h = {renaming[v]: h[v] for v in labels}
    created = set(new_labels) - set(old)

    rejecting = frozenset(removed | renamed | created)
    result = GHT.build(new_labels, new_h)
    if __debug__:
        result.check()
    return GhtStep(result, frozenset(accepting) - rejecting, rejecting)


class RabinDeterminisation:
    """Lazy Rabin automaton over trees; node names become pair indices in
    order of first appearance."""

    def __init__(self, ngba: NGBA, initial: Optional[GHT] = None):
        self.ngba = ngba
        self.initial_tree = initial or ght_initial(ngba)
        self.pair_names: List[Node] = []
        self.pair_index: Dict[Node, int] = {}
        self._lock = threading.Lock()
        self.register(self.initial_tree.names)
        self.automaton = LazyDeterministicAutomaton(ngba.alphabet, self.initial_tree, self.successor,
                                                    AcceptanceKind.RABIN, lambda: len(self.pair_names))

    def register(self, names) -> None:
        with self._lock:
            for v in sorted(names):
                if v not in self.pair_index:
                    self.pair_index[v] = len(self.pair_names)
                    self.pair_names.append(v)

    def successor(self, tree: GHT, symbol: int) -> Optional[Tuple[GHT, RabinMark]]:
        result = ght_successor(tree, symbol, self.ngba)
        if result is None:
            return None
        self.register(set(result.tree.names) | result.accepting | result.rejecting)
        mark = RabinMark(frozenset(self.pair_index[v] for v in result.accepting),
                         frozenset(self.pair_index[v] for v in result.rejecting))
        return result.tree, mark

    def materialize(self, max_states: Optional[int] = None) -> DeterministicAutomaton:
        automaton = self.automaton.materialize(max_states)
        logger.debug(f"Rabin determinisation: {automaton.num_states} trees, {len(self.pair_names)} pairs")
        return automaton


def determinise_rabin(ngba: NGBA, initial: Optional[GHT] = None) -> DeterministicAutomaton:
    return RabinDeterminisation(ngba, initial).materialize()
