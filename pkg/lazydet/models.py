# lazydet/models.py
"""Markov chains and MDPs with an explicit text format.

Transitions file, one entry per line::

    #states 3
    #aps a b c
    #init 0            (or '#init 0:1/2 1:1/2')
    0 2 2/3            MC:  src dst prob
    0 go 1 1/3         MDP: src action dst prob

Labels file, one state per line: ``0: a b``. Other lines starting with
``#`` are comments; repeated entries for the same transition add up.
"""

import logging
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from scipy import sparse

from .automata import Alphabet
from .config import config
from .exceptions import AlphabetError, InputError, ModelFormatError
from .graph import TransitionGraph

logger = logging.getLogger(__name__)

Distribution = Tuple[Tuple[int, float], ...]


class MarkovModel:
    """Common shape of MCs and MDPs: a list of named distributions per state"""

    is_mdp = False

    def __init__(self, propositions: Sequence[str], labels: Sequence[Iterable[str]],
                 initial: Dict[int, float], choices: List[List[Tuple[Optional[str], Distribution]]]):
        self.propositions = tuple(propositions)
        self.labels: List[FrozenSet[str]] = [frozenset(label) for label in labels]
        self.initial = dict(initial)
        self.choices = choices
        if len(self.labels) != len(self.choices):
            raise ModelFormatError(f"{len(self.labels)} labels for {len(self.choices)} states")

    @property
    def num_states(self) -> int:
        return len(self.choices)

    def distributions(self, state: int) -> List[Distribution]:
        return [distribution for _, distribution in self.choices[state]]

    def graph(self) -> TransitionGraph:
        return TransitionGraph([
            [tuple(sorted({t for t, _ in distribution})) for distribution in self.distributions(s)]
            for s in range(self.num_states)
        ])

    def label_symbols(self, alphabet: Alphabet) -> List[int]:
        """Labels projected onto an automaton alphabet"""
        unknown = [p for p in alphabet.propositions if p not in self.propositions]
        if unknown:
            raise AlphabetError(f"automaton propositions {unknown} are not declared by the model")
        return [alphabet.project(label) for label in self.labels]

    def initial_items(self) -> List[Tuple[int, float]]:
        return sorted(self.initial.items())


class MarkovChain(MarkovModel):
    def __init__(self, propositions: Sequence[str], labels: Sequence[Iterable[str]],
                 initial: Dict[int, float], rows: Sequence[Iterable[Tuple[int, float]]]):
        choices = []
        for row in rows:
            row = tuple(sorted(row))
            choices.append([(None, row)] if row else [])
        super().__init__(propositions, labels, initial, choices)

    def matrix(self) -> sparse.csr_matrix:
        rows, cols, data = [], [], []
        for s in range(self.num_states):
            for distribution in self.distributions(s):
                for t, p in distribution:
                    rows.append(s)
                    cols.append(t)
                    data.append(p)
        n = self.num_states
        return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


class MDP(MarkovModel):
    is_mdp = True

    def __init__(self, propositions: Sequence[str], labels: Sequence[Iterable[str]],
                 initial: Dict[int, float], actions: Sequence[Sequence[Tuple[str, Iterable[Tuple[int, float]]]]]):
        choices = [[(name, tuple(sorted(distribution))) for name, distribution in state_actions]
                   for state_actions in actions]
        super().__init__(propositions, labels, initial, choices)

    def action_names(self, state: int) -> List[str]:
        return [name for name, _ in self.choices[state]]


def _probability(token: str, line_number: int) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ModelFormatError(f"line {line_number}: bad probability {token!r}")
    if not 0 <= value <= 1:
        raise ModelFormatError(f"line {line_number}: probability {token} outside [0,1]")
    return value


def _state(token: str, line_number: int) -> int:
    try:
        state = int(token)
    except ValueError:
        raise ModelFormatError(f"line {line_number}: bad state index {token!r}")
    if state < 0:
        raise ModelFormatError(f"line {line_number}: negative state index {state}")
    return state


def _parse_initial(tokens: List[str], line_number: int) -> Dict[int, Fraction]:
    initial: Dict[int, Fraction] = {}
    for token in tokens:
        state, _, weight = token.partition(':')
        value = _probability(weight, line_number) if weight else Fraction(1)
        s = _state(state, line_number)
        initial[s] = initial.get(s, Fraction(0)) + value
    return initial


def parse_model(transitions_text: str, labels_text: str, kind: str = 'mc',
                settings=None) -> MarkovModel:
    settings = settings or config['default']
    if kind not in ('mc', 'mdp'):
        raise InputError(f"unknown model kind {kind!r}, expected 'mc' or 'mdp'")

    num_states: Optional[int] = None
    declared: Optional[List[str]] = None
    initial: Optional[Dict[int, Fraction]] = None
    entries: Dict[Tuple[int, Optional[str]], Dict[int, Fraction]] = {}
    highest = -1

    for line_number, line in enumerate(transitions_text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        if tokens[0] == '#states':
            if len(tokens) != 2:
                raise ModelFormatError(f"line {line_number}: expected '#states N'")
            num_states = _state(tokens[1], line_number)
            continue
        if tokens[0] == '#aps':
            declared = tokens[1:]
            continue
        if tokens[0] == '#init':
            initial = _parse_initial(tokens[1:], line_number)
            continue
        if tokens[0].startswith('#'):
            continue
        expected = 3 if kind == 'mc' else 4
        if len(tokens) != expected:
            shape = "src dst prob" if kind == 'mc' else "src action dst prob"
            raise ModelFormatError(f"line {line_number}: expected '{shape}'")
        source = _state(tokens[0], line_number)
        action = None if kind == 'mc' else tokens[1]
        target = _state(tokens[-2], line_number)
        probability = _probability(tokens[-1], line_number)
        highest = max(highest, source, target)
        row = entries.setdefault((source, action), {})
        row[target] = row.get(target, Fraction(0)) + probability

    labels: Dict[int, List[str]] = {}
    for line_number, line in enumerate(labels_text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            if stripped.startswith('#aps'):
                declared = stripped.split()[1:]
            continue
        state, colon, rest = stripped.partition(':')
        if not colon:
            raise ModelFormatError(f"labels line {line_number}: expected 'state: ap ...'")
        s = _state(state.strip(), line_number)
        highest = max(highest, s)
        labels.setdefault(s, []).extend(rest.split())

    if num_states is None:
        num_states = highest + 1
    if highest >= num_states:
        raise ModelFormatError(f"dangling state index {highest} (model has {num_states} states)", state=highest)

    if declared is None:
        declared = []
        for s in sorted(labels):
            declared.extend(p for p in labels[s] if p not in declared)
    else:
        for s, props in sorted(labels.items()):
            for p in props:
                if p not in declared:
                    raise ModelFormatError(f"state {s} is labelled with undeclared proposition '{p}'", state=s)

    for (source, action), row in sorted(entries.items(), key=lambda e: (e[0][0], e[0][1] or '')):
        total = sum(row.values())
        if abs(float(total) - 1.0) > settings.STOCHASTIC_TOLERANCE:
            where = f"state {source}" if action is None else f"state {source} action '{action}'"
            raise ModelFormatError(f"transitions of {where} sum to {float(total)}", state=source)

    if initial is None:
        initial = {0: Fraction(1)}
    if abs(float(sum(initial.values())) - 1.0) > settings.STOCHASTIC_TOLERANCE:
        raise ModelFormatError(f"initial distribution sums to {float(sum(initial.values()))}")
    for s in initial:
        if s >= num_states:
            raise ModelFormatError(f"dangling initial state {s}", state=s)

    state_labels = [labels.get(s, []) for s in range(num_states)]
    initial_floats = {s: float(p) for s, p in initial.items() if p > 0}

    def distribution(row: Dict[int, Fraction]) -> List[Tuple[int, float]]:
        return [(t, float(p)) for t, p in sorted(row.items()) if p > 0]

    if kind == 'mc':
        rows = [distribution(entries.get((s, None), {})) for s in range(num_states)]
        model = MarkovChain(declared, state_labels, initial_floats, rows)
    else:
        actions: List[List[Tuple[str, List[Tuple[int, float]]]]] = [[] for _ in range(num_states)]
        for (source, action), row in entries.items():
            if distribution(row):
                actions[source].append((action, distribution(row)))
        model = MDP(declared, state_labels, initial_floats, actions)
    logger.info(f"loaded {kind} with {num_states} states over {declared}")
    return model


def load_model(transitions_file: str, labels_file: str, kind: str = 'mc', settings=None) -> MarkovModel:
    try:
        with open(transitions_file) as handle:
            transitions_text = handle.read()
        with open(labels_file) as handle:
            labels_text = handle.read()
    except OSError as error:
        raise InputError(f"cannot read model: {error}")
    return parse_model(transitions_text, labels_text, kind, settings)
