# lazydet/hoa.py
"""Reading and writing automata in the Hanoi Omega-Automata (HOA v1) format.

Only transition-based acceptance with explicit edge labels is supported.
Edge labels are expanded at parse time into the explicit set of symbols
they denote; the set is handled as one integer with bit s standing for
symbol s, so label formulas evaluate with plain integer operations.
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .automata import (MAX_PROPOSITIONS, AcceptanceKind, Alphabet, DeterministicAutomaton,
                       LazyDeterministicAutomaton, NGBA, RabinMark)
from .exceptions import HoaSyntaxError, UnsupportedAutomatonError

_TOKEN = re.compile(r'''
    (?P<ws>\s+)
  | (?P<comment>/\*.*?\*/)
  | (?P<body>--BODY--)
  | (?P<end>--END--)
  | (?P<abort>--ABORT--)
  | (?P<header>[A-Za-z_][A-Za-z0-9_-]*:)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<int>\d+)
  | (?P<alias>@[A-Za-z0-9_-]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_-]*)
  | (?P<punct>[\[\]{}()&|!])
''', re.VERBOSE | re.DOTALL)

SUPPORTED_NAMES = ('Buchi', 'generalized-Buchi', 'Rabin', 'parity', 'all', 'none')


@dataclass
class _Token:
    kind: str
    value: str
    line: int
    column: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise HoaSyntaxError(f"unexpected character {text[position]!r}", line, position - line_start + 1)
        kind = match.lastgroup
        value = match.group()
        if kind not in ('ws', 'comment'):
            tokens.append(_Token(kind, value, line, position - line_start + 1))
        newlines = value.count('\n')
        if newlines:
            line += newlines
            line_start = position + value.rindex('\n') + 1
        position = match.end()
    tokens.append(_Token('eof', '', line, position - line_start + 1))
    return tokens


class _HoaParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.position = 0
        self.num_states: Optional[int] = None
        self.starts: List[int] = []
        self.propositions: List[str] = []
        self.aliases: Dict[str, List[_Token]] = {}
        self.acceptance: List[_Token] = []
        self.acceptance_sets = 0
        self.acc_name: List[str] = []
        self.state_names: Dict[int, str] = {}
        self.edges: List[Tuple[int, int, int, Tuple[int, ...]]] = []

    # token helpers
    def peek(self) -> _Token:
        return self.tokens[self.position]

    def advance(self) -> _Token:
        token = self.tokens[self.position]
        if token.kind != 'eof':
            self.position += 1
        return token

    def fail(self, message: str, token: Optional[_Token] = None):
        token = token or self.peek()
        raise HoaSyntaxError(message, token.line, token.column)

    def expect(self, kind: str, value: Optional[str] = None) -> _Token:
        token = self.advance()
        if token.kind != kind or (value is not None and token.value != value):
            wanted = value or kind
            self.fail(f"expected {wanted}, found {token.value or token.kind!r}", token)
        return token

    def expect_int(self) -> int:
        return int(self.expect('int').value)

    def header_values(self) -> List[_Token]:
        values = []
        while self.peek().kind not in ('header', 'body', 'eof'):
            values.append(self.advance())
        return values

    # headers
    def parse_headers(self) -> None:
        self.expect('header', 'HOA:')
        version = self.expect('ident')
        if version.value != 'v1':
            self.fail(f"unsupported HOA version {version.value}", version)
        while self.peek().kind == 'header':
            header = self.advance()
            name = header.value[:-1]
            if name == 'States':
                self.num_states = self.expect_int()
            elif name == 'Start':
                self.starts.append(self.expect_int())
                if self.peek().value == '&':
                    raise UnsupportedAutomatonError("unsupported: universal initial states")
            elif name == 'AP':
                count = self.expect_int()
                if count > MAX_PROPOSITIONS:
                    raise UnsupportedAutomatonError(
                        f"{count} atomic propositions given, at most {MAX_PROPOSITIONS} supported")
                for _ in range(count):
                    self.propositions.append(self._string(self.expect('string')))
            elif name == 'Alias':
                alias = self.expect('alias')
                self.aliases[alias.value] = self.header_values()
            elif name == 'Acceptance':
                self.acceptance_sets = self.expect_int()
                self.acceptance = self.header_values()
            elif name == 'acc-name':
                self.acc_name = [token.value for token in self.header_values()]
            elif name == 'properties':
                values = [token.value for token in self.header_values()]
                if 'state-acc' in values:
                    raise UnsupportedAutomatonError("unsupported: state-based acceptance")
                if 'implicit-labels' in values:
                    raise UnsupportedAutomatonError("unsupported: implicit edge labels")
            else:
                self.header_values()
        self.expect('body')
        if self.num_states is None:
            self.fail("missing States: header")

    @staticmethod
    def _string(token: _Token) -> str:
        return bytes(token.value[1:-1], 'utf-8').decode('unicode_escape')

    # body
    def parse_body(self) -> None:
        while self.peek().kind == 'header':
            header = self.expect('header', 'State:')
            if self.peek().value == '[':
                raise UnsupportedAutomatonError("unsupported: state labels")
            state = self.expect_int()
            if not 0 <= state < self.num_states:
                self.fail(f"state {state} out of range", header)
            if self.peek().kind == 'string':
                self.state_names[state] = self._string(self.advance())
            if self.peek().value == '{':
                raise UnsupportedAutomatonError("unsupported: state-based acceptance")
            while self.peek().kind in ('punct', 'int') and self.peek().value != '{':
                self.parse_edge(state)
        self.expect('end')

    def parse_edge(self, source: int) -> None:
        if self.peek().value != '[':
            raise UnsupportedAutomatonError("unsupported: implicit edge labels")
        self.advance()
        label = []
        while self.peek().value != ']':
            if self.peek().kind == 'eof':
                self.fail("unterminated edge label")
            label.append(self.advance())
        self.advance()
        target_token = self.peek()
        target = self.expect_int()
        if not 0 <= target < self.num_states:
            self.fail(f"state {target} out of range", target_token)
        if self.peek().value == '&':
            raise UnsupportedAutomatonError("unsupported: universal branching")
        marks: List[int] = []
        if self.peek().value == '{':
            self.advance()
            while self.peek().value != '}':
                marks.append(self.expect_int())
            self.advance()
        symbols = self.evaluate_label(label)
        self.edges.append((source, symbols, target, tuple(sorted(marks))))

    # label formulas
    def evaluate_label(self, tokens: List[_Token]) -> int:
        size = 1 << len(self.propositions)
        universe = (1 << size) - 1
        stream = list(tokens) + [_Token('eof', '', 0, 0)]
        cursor = [0]
        active_aliases: List[str] = []

        def peek() -> _Token:
            return stream[cursor[0]]

        def take() -> _Token:
            token = stream[cursor[0]]
            cursor[0] += 1
            return token

        def disjunction() -> int:
            value = conjunction()
            while peek().value == '|':
                take()
                value |= conjunction()
            return value

        def conjunction() -> int:
            value = negation()
            while peek().value == '&':
                take()
                value &= negation()
            return value

        def negation() -> int:
            if peek().value == '!':
                take()
                return universe & ~negation()
            return atom()

        def atom() -> int:
            token = take()
            if token.value == '(':
                value = disjunction()
                if take().value != ')':
                    self.fail("expected ')' in label", token)
                return value
            if token.kind == 'ident' and token.value in ('t', 'f'):
                return universe if token.value == 't' else 0
            if token.kind == 'int':
                index = int(token.value)
                if index >= len(self.propositions):
                    self.fail(f"atomic proposition {index} not declared", token)
                return self._proposition_symbols(index)
            if token.kind == 'alias':
                if token.value not in self.aliases or token.value in active_aliases:
                    self.fail(f"undefined alias {token.value}", token)
                active_aliases.append(token.value)
                value = self.evaluate_label(self.aliases[token.value])
                active_aliases.pop()
                return value
            self.fail(f"unexpected {token.value or 'end of label'!r} in label", token)

        value = disjunction()
        if peek().kind != 'eof':
            self.fail(f"unexpected {peek().value!r} in label", peek())
        return value

    def _proposition_symbols(self, index: int) -> int:
        bits = 0
        for symbol in range(1 << len(self.propositions)):
            if symbol >> index & 1:
                bits |= 1 << symbol
        return bits

    # acceptance conditions
    def parse_condition(self):
        stream = self.acceptance + [_Token('eof', '', 0, 0)]
        cursor = [0]

        def take() -> _Token:
            token = stream[cursor[0]]
            cursor[0] += 1
            return token

        def peek() -> _Token:
            return stream[cursor[0]]

        def disjunction():
            value = conjunction()
            while peek().value == '|':
                take()
                value = ('|', value, conjunction())
            return value

        def conjunction():
            value = atom()
            while peek().value == '&':
                take()
                value = ('&', value, atom())
            return value

        def atom():
            token = take()
            if token.value == '(':
                value = disjunction()
                if take().value != ')':
                    self.fail("expected ')' in acceptance condition", token)
                return value
            if token.value in ('t', 'f'):
                return (token.value,)
            if token.value in ('Inf', 'Fin'):
                if take().value != '(':
                    self.fail("expected '(' after " + token.value, token)
                if peek().value == '!':
                    raise UnsupportedAutomatonError("unsupported: complemented acceptance sets")
                index = int(self.expect_in(stream, cursor, 'int').value)
                if take().value != ')':
                    self.fail("expected ')' in acceptance condition", token)
                return (token.value, index)
            self.fail(f"unexpected {token.value or 'end of condition'!r} in acceptance condition", token)

        if not self.acceptance:
            self.fail("missing Acceptance: header")
        condition = disjunction()
        if peek().kind != 'eof':
            self.fail(f"unexpected {peek().value!r} in acceptance condition", peek())
        return condition

    def expect_in(self, stream, cursor, kind) -> _Token:
        token = stream[cursor[0]]
        cursor[0] += 1
        if token.kind != kind:
            self.fail(f"expected {kind} in acceptance condition", token)
        return token


def _flatten(condition, operator: str) -> list:
    if condition[0] == operator:
        return _flatten(condition[1], operator) + _flatten(condition[2], operator)
    return [condition]


def _buchi_sets(condition) -> Optional[List[Optional[int]]]:
    """Inf indices of a conjunction of Inf atoms; [None] for `t`"""
    if condition == ('t',):
        return [None]
    parts = _flatten(condition, '&')
    if all(part[0] == 'Inf' for part in parts):
        return [part[1] for part in parts]
    return None


def _rabin_pairs(condition) -> Optional[List[Tuple[Optional[int], int]]]:
    if condition == ('f',):
        return []
    pairs = []
    for disjunct in _flatten(condition, '|'):
        parts = _flatten(disjunct, '&')
        fins = [p[1] for p in parts if p[0] == 'Fin']
        infs = [p[1] for p in parts if p[0] == 'Inf']
        if len(infs) != 1 or len(fins) > 1 or len(fins) + len(infs) != len(parts):
            return None
        pairs.append((fins[0] if fins else None, infs[0]))
    return pairs


def hoa_parse(text: str) -> Union[NGBA, DeterministicAutomaton]:
    """Parse HOA text into an NGBA (Büchi kinds) or a deterministic automaton"""
    parser = _HoaParser(text)
    parser.parse_headers()
    parser.parse_body()
    condition = parser.parse_condition()
    alphabet = Alphabet(tuple(parser.propositions))
    n = parser.num_states
    names = None
    if n and len(parser.state_names) == n:
        names = tuple(parser.state_names[q] for q in range(n))

    name = parser.acc_name[0] if parser.acc_name else None
    if name is not None and name not in SUPPORTED_NAMES:
        raise UnsupportedAutomatonError(f"unsupported acceptance kind '{name}'")

    if name == 'parity':
        if parser.acc_name[1:3] != ['min', 'even']:
            raise UnsupportedAutomatonError(f"unsupported parity variant '{' '.join(parser.acc_name)}'")
        return _deterministic(parser, alphabet, names, AcceptanceKind.PARITY, None)
    if name == 'none' or (name is None and condition == ('f',)):
        return _ngba(parser, alphabet, names, [])
    if name == 'Rabin':
        pairs = _rabin_pairs(condition)
        if pairs is None:
            raise UnsupportedAutomatonError("acceptance condition is not a Rabin condition")
        return _deterministic(parser, alphabet, names, AcceptanceKind.RABIN, pairs)

    sets = _buchi_sets(condition)
    if sets is not None:
        return _ngba(parser, alphabet, names, sets)
    if name is None:
        pairs = _rabin_pairs(condition)
        if pairs is not None:
            return _deterministic(parser, alphabet, names, AcceptanceKind.RABIN, pairs)
    raise UnsupportedAutomatonError("unsupported acceptance condition")


def _expanded(parser: _HoaParser):
    for source, symbols, target, marks in parser.edges:
        symbol = 0
        while symbols:
            if symbols & 1:
                yield source, symbol, target, marks
            symbols >>= 1
            symbol += 1


def _ngba(parser: _HoaParser, alphabet: Alphabet, names, sets: List[Optional[int]]) -> NGBA:
    if not parser.starts:
        raise UnsupportedAutomatonError("automaton without initial state")
    transitions = set()
    accepting = [set() for _ in range(max(len(sets), 1))]
    for source, symbol, target, marks in _expanded(parser):
        transitions.add((source, symbol, target))
        for j, index in enumerate(sets):
            if index is None or index in marks:
                accepting[j].add((source, symbol, target))
    return NGBA(alphabet, parser.num_states, frozenset(parser.starts), frozenset(transitions),
                tuple(frozenset(f) for f in accepting), names)


def _deterministic(parser: _HoaParser, alphabet: Alphabet, names, kind: AcceptanceKind,
                   pairs: Optional[List[Tuple[Optional[int], int]]]) -> DeterministicAutomaton:
    if len(parser.starts) != 1:
        raise UnsupportedAutomatonError(f"{kind.value} automata need exactly one initial state")
    transitions = {}
    top = 0
    for source, symbol, target, marks in _expanded(parser):
        if (source, symbol) in transitions:
            raise UnsupportedAutomatonError(f"unsupported: nondeterministic {kind.value} automaton")
        if kind is AcceptanceKind.PARITY:
            if not marks:
                raise UnsupportedAutomatonError(f"parity edge from state {source} without colour")
            mark = min(marks)
            top = max(top, mark)
        else:
            mark = RabinMark(frozenset(i for i, (_, inf) in enumerate(pairs) if inf in marks),
                             frozenset(i for i, (fin, _) in enumerate(pairs) if fin is not None and fin in marks))
        transitions[(source, symbol)] = (target, mark)
    if kind is AcceptanceKind.PARITY:
        declared = int(parser.acc_name[3]) - 1 if len(parser.acc_name) > 3 else top
        num_marks = max(top, declared)
    else:
        num_marks = len(pairs)
    return DeterministicAutomaton(alphabet, parser.num_states, parser.starts[0], transitions,
                                  kind, num_marks, names)


def _label(alphabet: Alphabet, symbol: int) -> str:
    if not alphabet.propositions:
        return "t"
    return "&".join(str(i) if symbol >> i & 1 else f"!{i}" for i in range(len(alphabet.propositions)))


def _parity_condition(colours: int, colour: int = 0) -> str:
    atom = f"Inf({colour})" if colour % 2 == 0 else f"Fin({colour})"
    if colour == colours - 1:
        return atom
    joiner = " | " if colour % 2 == 0 else " & "
    return f"{atom}{joiner}({_parity_condition(colours, colour + 1)})"


def hoa_emit(automaton: Union[NGBA, DeterministicAutomaton, LazyDeterministicAutomaton],
             name: Optional[str] = None) -> str:
    """Serialize an automaton; symbols become full conjunctions over the APs"""
    if isinstance(automaton, LazyDeterministicAutomaton):
        automaton = automaton.materialize()
    alphabet = automaton.alphabet
    lines = ["HOA: v1"]
    if name:
        lines.append(f'name: "{name}"')
    lines.append(f"States: {automaton.num_states}")

    edges: List[Tuple[int, int, int, Sequence[int]]] = []
    names: Optional[Sequence] = None
    if isinstance(automaton, NGBA):
        lines.extend(f"Start: {q}" for q in sorted(automaton.initial))
        for q, symbol, target in automaton.sorted_transitions():
            bits = automaton.acceptance_bits(q, symbol, target)
            edges.append((q, symbol, target, [j for j in range(automaton.k) if bits >> j & 1]))
        acceptance = _buchi_header(automaton.k)
        properties = "trans-labels explicit-labels trans-acc"
        names = automaton.state_names
    else:
        lines.append(f"Start: {automaton.initial}")
        for q, symbol, target, mark in automaton.edges():
            edges.append((q, symbol, target, _mark_sets(automaton.kind, mark)))
        acceptance = _deterministic_header(automaton)
        properties = "trans-labels explicit-labels trans-acc deterministic"
        labels = automaton.state_labels
        if labels and all(isinstance(label, str) for label in labels):
            names = labels
    lines.append(f"AP: {len(alphabet.propositions)}" +
                 "".join(f' "{p}"' for p in alphabet.propositions))
    lines.extend(acceptance)
    lines.append(f"properties: {properties}")
    lines.append("--BODY--")
    by_state: Dict[int, List[str]] = {}
    for q, symbol, target, sets in edges:
        text = f"[{_label(alphabet, symbol)}] {target}"
        if sets:
            text += " {" + " ".join(str(s) for s in sets) + "}"
        by_state.setdefault(q, []).append(text)
    for q in range(automaton.num_states):
        lines.append(f'State: {q} "{names[q]}"' if names else f"State: {q}")
        lines.extend(by_state.get(q, []))
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def _buchi_header(k: int) -> List[str]:
    condition = "&".join(f"Inf({j})" for j in range(k))
    if k == 1:
        return ["acc-name: Buchi", f"Acceptance: 1 {condition}"]
    return [f"acc-name: generalized-Buchi {k}", f"Acceptance: {k} {condition}"]


def _deterministic_header(automaton: DeterministicAutomaton) -> List[str]:
    if automaton.kind is AcceptanceKind.BUCHI:
        return _buchi_header(automaton.num_marks)
    if automaton.kind is AcceptanceKind.RABIN:
        pairs = automaton.num_marks
        if pairs == 0:
            return ["acc-name: Rabin 0", "Acceptance: 0 f"]
        condition = " | ".join(f"(Fin({2 * i})&Inf({2 * i + 1}))" for i in range(pairs))
        return [f"acc-name: Rabin {pairs}", f"Acceptance: {2 * pairs} {condition}"]
    colours = automaton.num_marks + 1
    return [f"acc-name: parity min even {colours}",
            f"Acceptance: {colours} {_parity_condition(colours)}"]


def _mark_sets(kind: AcceptanceKind, mark) -> List[int]:
    if kind is AcceptanceKind.BUCHI:
        return sorted(mark)
    if kind is AcceptanceKind.RABIN:
        return sorted([2 * i for i in mark.rejecting] + [2 * i + 1 for i in mark.accepting])
    return [mark]
