# lazydet/ltl.py
"""LTL formulas: parsing, normal forms, tableau translation to NGBAs and
evaluation on ultimately periodic words.

Grammar (loosest binding first)::

    or    := and ('|' and)*
    and   := bin ('&' bin)*
    bin   := unary (('U' | 'R') bin)?          right associative
    unary := ('!' | 'X' | 'F' | 'G') unary | atom
    atom  := 'true' | 'false' | ident | '(' or ')'

Identifiers start with a lower-case letter or underscore; operators are
single upper-case letters, so `GFa` reads as `G(F(a))`.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .automata import Alphabet, LassoWord, NGBA
from .exceptions import AlphabetError, LtlSyntaxError

logger = logging.getLogger(__name__)


class Ltl:
    pass


@dataclass(frozen=True)
class TrueConst(Ltl):
    pass


@dataclass(frozen=True)
class FalseConst(Ltl):
    pass


@dataclass(frozen=True)
class Prop(Ltl):
    name: str


@dataclass(frozen=True)
class Not(Ltl):
    operand: Ltl


@dataclass(frozen=True)
class Next(Ltl):
    operand: Ltl


@dataclass(frozen=True)
class Eventually(Ltl):
    operand: Ltl


@dataclass(frozen=True)
class Always(Ltl):
    operand: Ltl


@dataclass(frozen=True)
class And(Ltl):
    left: Ltl
    right: Ltl


@dataclass(frozen=True)
class Or(Ltl):
    left: Ltl
    right: Ltl


@dataclass(frozen=True)
class Until(Ltl):
    left: Ltl
    right: Ltl


@dataclass(frozen=True)
class Release(Ltl):
    left: Ltl
    right: Ltl


LtlFormula = Ltl

_UNARY = {'!': Not, 'X': Next, 'F': Eventually, 'G': Always}
_BINARY = {'U': Until, 'R': Release}
_SYMBOLS = {Not: '!', Next: 'X', Eventually: 'F', Always: 'G',
            And: '&', Or: '|', Until: 'U', Release: 'R'}

_TOKEN = re.compile(r'\s*(?:(?P<ident>[a-z_][A-Za-z0-9_]*)|(?P<op>[()!&|])|(?P<upper>[A-Z]))')


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == '':
            break
        match = _TOKEN.match(text, position)
        if match is None:
            offset = len(text[position:]) - len(text[position:].lstrip())
            raise LtlSyntaxError(f"unexpected character {text[position + offset]!r}", position + offset)
        kind = match.lastgroup
        value = match.group(kind)
        start = match.start(kind)
        if kind == 'upper' and value not in 'XURFG':
            raise LtlSyntaxError(f"unknown operator {value!r}", start)
        tokens.append((kind, value, start))
        position = match.end()
    tokens.append(('eof', '', len(text)))
    return tokens


class _LtlParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.position = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.position]

    def advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def parse(self) -> Ltl:
        formula = self.disjunction()
        kind, value, start = self.peek()
        if kind != 'eof':
            raise LtlSyntaxError(f"unexpected {value!r}", start)
        return formula

    def disjunction(self) -> Ltl:
        formula = self.conjunction()
        while self.peek()[1] == '|':
            self.advance()
            formula = Or(formula, self.conjunction())
        return formula

    def conjunction(self) -> Ltl:
        formula = self.binary()
        while self.peek()[1] == '&':
            self.advance()
            formula = And(formula, self.binary())
        return formula

    def binary(self) -> Ltl:
        left = self.unary()
        kind, value, _ = self.peek()
        if kind == 'upper' and value in _BINARY:
            self.advance()
            return _BINARY[value](left, self.binary())
        return left

    def unary(self) -> Ltl:
        kind, value, _ = self.peek()
        if value in _UNARY and kind in ('op', 'upper'):
            self.advance()
            return _UNARY[value](self.unary())
        return self.atom()

    def atom(self) -> Ltl:
        kind, value, start = self.advance()
        if value == '(':
            formula = self.disjunction()
            closing = self.advance()
            if closing[1] != ')':
                raise LtlSyntaxError("expected ')'", closing[2])
            return formula
        if kind == 'ident':
            if value == 'true':
                return TrueConst()
            if value == 'false':
                return FalseConst()
            return Prop(value)
        raise LtlSyntaxError(f"unexpected {value or 'end of input'!r}", start)


def parse_ltl(text: str) -> Ltl:
    return _LtlParser(text).parse()


def to_string(formula: Ltl) -> str:
    match formula:
        case TrueConst():
            return "true"
        case FalseConst():
            return "false"
        case Prop(name):
            return name
        case Not(operand) | Next(operand) | Eventually(operand) | Always(operand):
            return f"{_SYMBOLS[type(formula)]}({to_string(operand)})"
        case And(left, right) | Or(left, right) | Until(left, right) | Release(left, right):
            return f"({to_string(left)} {_SYMBOLS[type(formula)]} {to_string(right)})"
    raise TypeError(f"not an LTL formula: {formula!r}")


def negate(formula: Ltl) -> Ltl:
    return Not(formula)


def to_nnf(formula: Ltl) -> Ltl:
    """Push negations down to the atomic propositions"""
    return _nnf(formula, False)


def _nnf(formula: Ltl, negated: bool) -> Ltl:
    match formula:
        case TrueConst():
            return FalseConst() if negated else formula
        case FalseConst():
            return TrueConst() if negated else formula
        case Prop():
            return Not(formula) if negated else formula
        case Not(operand):
            return _nnf(operand, not negated)
        case Next(operand):
            return Next(_nnf(operand, negated))
        case Eventually(operand):
            return Always(_nnf(operand, True)) if negated else Eventually(_nnf(operand, False))
        case Always(operand):
            return Eventually(_nnf(operand, True)) if negated else Always(_nnf(operand, False))
        case And(left, right):
            if negated:
                return Or(_nnf(left, True), _nnf(right, True))
            return And(_nnf(left, False), _nnf(right, False))
        case Or(left, right):
            if negated:
                return And(_nnf(left, True), _nnf(right, True))
            return Or(_nnf(left, False), _nnf(right, False))
        case Until(left, right):
            if negated:
                return Release(_nnf(left, True), _nnf(right, True))
            return Until(_nnf(left, False), _nnf(right, False))
        case Release(left, right):
            if negated:
                return Until(_nnf(left, True), _nnf(right, True))
            return Release(_nnf(left, False), _nnf(right, False))
    raise TypeError(f"not an LTL formula: {formula!r}")


def is_nnf(formula: Ltl) -> bool:
    match formula:
        case Not(operand):
            return isinstance(operand, Prop)
        case Next(operand) | Eventually(operand) | Always(operand):
            return is_nnf(operand)
        case And(left, right) | Or(left, right) | Until(left, right) | Release(left, right):
            return is_nnf(left) and is_nnf(right)
    return True


def _core(formula: Ltl) -> Ltl:
    """Rewrite F and G into U and R; the argument is in NNF"""
    match formula:
        case Eventually(operand):
            return Until(TrueConst(), _core(operand))
        case Always(operand):
            return Release(FalseConst(), _core(operand))
        case Next(operand):
            return Next(_core(operand))
        case And(left, right):
            return And(_core(left), _core(right))
        case Or(left, right):
            return Or(_core(left), _core(right))
        case Until(left, right):
            return Until(_core(left), _core(right))
        case Release(left, right):
            return Release(_core(left), _core(right))
    return formula


def subformulas(formula: Ltl) -> Set[Ltl]:
    found = {formula}
    for name in ('operand', 'left', 'right'):
        child = getattr(formula, name, None)
        if child is not None:
            found |= subformulas(child)
    return found


def atomic_propositions(formula: Ltl) -> List[str]:
    return sorted({f.name for f in subformulas(formula) if isinstance(f, Prop)})


def formula_size(formula: Ltl) -> int:
    size = 1
    for name in ('operand', 'left', 'right'):
        child = getattr(formula, name, None)
        if child is not None:
            size += formula_size(child)
    return size


@dataclass(frozen=True)
class _Cover:
    positive: int
    negative: int
    successor: FrozenSet[Ltl]
    pending: FrozenSet[Ltl]


class _Tableau:
    """On-the-fly expansion of obligation sets into covers."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.covers: Dict[FrozenSet[Ltl], List[_Cover]] = {}

    def bit(self, name: str) -> int:
        return 1 << self.alphabet.propositions.index(name)

    def expand(self, obligations: FrozenSet[Ltl]) -> List[_Cover]:
        if obligations not in self.covers:
            found: Set[_Cover] = set()
            self._expand(tuple(sorted(obligations, key=to_string)), frozenset(), 0, 0,
                         frozenset(), frozenset(), found)
            self.covers[obligations] = sorted(
                found, key=lambda c: (c.positive, c.negative, sorted(map(to_string, c.successor)),
                                      sorted(map(to_string, c.pending))))
        return self.covers[obligations]

    def _expand(self, todo, done, positive, negative, successor, pending, found) -> None:
        while todo and todo[0] in done:
            todo = todo[1:]
        if not todo:
            found.add(_Cover(positive, negative, successor, pending))
            return
        formula, rest = todo[0], todo[1:]
        done = done | {formula}
        match formula:
            case TrueConst():
                self._expand(rest, done, positive, negative, successor, pending, found)
            case FalseConst():
                return
            case Prop(name):
                bit = self.bit(name)
                if not negative & bit:
                    self._expand(rest, done, positive | bit, negative, successor, pending, found)
            case Not(Prop(name)):
                bit = self.bit(name)
                if not positive & bit:
                    self._expand(rest, done, positive, negative | bit, successor, pending, found)
            case And(left, right):
                self._expand((left, right) + rest, done, positive, negative, successor, pending, found)
            case Or(left, right):
                self._expand((left,) + rest, done, positive, negative, successor, pending, found)
                self._expand((right,) + rest, done, positive, negative, successor, pending, found)
            case Next(operand):
                following = successor if isinstance(operand, TrueConst) else successor | {operand}
                self._expand(rest, done, positive, negative, following, pending, found)
            case Until(left, right):
                self._expand((right,) + rest, done, positive, negative, successor, pending, found)
                self._expand((left,) + rest, done, positive, negative, successor | {formula},
                             pending | {formula}, found)
            case Release(left, right):
                self._expand((right, left) + rest, done, positive, negative, successor, pending, found)
                self._expand((right,) + rest, done, positive, negative, successor | {formula},
                             pending, found)
            case _:
                raise TypeError(f"formula not in negation normal form: {to_string(formula)}")


def translate_ltl_to_ngba(formula: Ltl, propositions: Optional[Sequence[str]] = None) -> NGBA:
    """Tableau translation with one accepting set per Until subformula.

    A transition belongs to the set of `φ U ψ` unless the cover postponed
    that Until through its left branch."""
    core = _core(to_nnf(formula))
    used = atomic_propositions(core)
    if propositions is None:
        propositions = used
    missing = [p for p in used if p not in propositions]
    if missing:
        raise AlphabetError(f"formula mentions undeclared propositions {missing}")
    alphabet = Alphabet(tuple(propositions))
    untils = sorted((f for f in subformulas(core) if isinstance(f, Until)), key=to_string)
    k = max(len(untils), 1)

    tableau = _Tableau(alphabet)
    start = frozenset({core}) - {TrueConst()}
    index: Dict[FrozenSet[Ltl], int] = {start: 0}
    order = [start]
    queue = deque([start])
    marks: Dict[Tuple[int, int, int], int] = {}
    while queue:
        obligations = queue.popleft()
        source = index[obligations]
        for cover in tableau.expand(obligations):
            target_set = cover.successor - {TrueConst()}
            if target_set not in index:
                index[target_set] = len(order)
                order.append(target_set)
                queue.append(target_set)
            target = index[target_set]
            if untils:
                bits = sum(1 << j for j, u in enumerate(untils) if u not in cover.pending)
            else:
                bits = 1
            for symbol in alphabet.symbols():
                if symbol & cover.positive == cover.positive and not symbol & cover.negative:
                    key = (source, symbol, target)
                    marks[key] = marks.get(key, 0) | bits

    accepting = tuple(frozenset(t for t, bits in marks.items() if bits >> j & 1) for j in range(k))
    names = tuple(" & ".join(sorted(map(to_string, s))) or "true" for s in order)
    logger.debug(f"tableau for {to_string(formula)}: {len(order)} states, k={k}")
    return NGBA(alphabet, len(order), frozenset({0}), frozenset(marks), accepting, names)


def eval_ltl_on_lasso(formula: Ltl, word: LassoWord, alphabet: Alphabet) -> bool:
    """Truth of the formula on u·v^ω, by fixpoints over the lasso positions"""
    n = len(word)
    following = [word.next_position(i) for i in range(n)]
    memo: Dict[Ltl, List[bool]] = {}

    def fixpoint(seed: bool, update) -> List[bool]:
        values = [seed] * n
        while True:
            updated = [update(i, values) for i in range(n)]
            if updated == values:
                return values
            values = updated

    def evaluate(f: Ltl) -> List[bool]:
        if f in memo:
            return memo[f]
        match f:
            case TrueConst():
                result = [True] * n
            case FalseConst():
                result = [False] * n
            case Prop(name):
                if name not in alphabet.propositions:
                    raise AlphabetError(f"unknown atomic proposition '{name}'")
                bit = alphabet.propositions.index(name)
                result = [bool(word.symbol_at(i) >> bit & 1) for i in range(n)]
            case Not(operand):
                result = [not v for v in evaluate(operand)]
            case And(left, right):
                result = [a and b for a, b in zip(evaluate(left), evaluate(right))]
            case Or(left, right):
                result = [a or b for a, b in zip(evaluate(left), evaluate(right))]
            case Next(operand):
                inner = evaluate(operand)
                result = [inner[following[i]] for i in range(n)]
            case Eventually(operand):
                result = evaluate(Until(TrueConst(), operand))
            case Always(operand):
                result = evaluate(Release(FalseConst(), operand))
            case Until(left, right):
                a, b = evaluate(left), evaluate(right)
                result = fixpoint(False, lambda i, v: b[i] or (a[i] and v[following[i]]))
            case Release(left, right):
                a, b = evaluate(left), evaluate(right)
                result = fixpoint(True, lambda i, v: b[i] and (a[i] or v[following[i]]))
            case _:
                raise TypeError(f"not an LTL formula: {f!r}")
        memo[f] = result
        return result

    return evaluate(formula)[0]
