# lazydet/random_instances.py
"""Random automata, words, models and formulas for fuzz testing.

All generators take a `numpy.random.Generator`; `make_rng` seeds one from
the configured RANDOM_SEED so runs are reproducible.
"""

from typing import List, Optional, Sequence

import numpy as np

from .automata import Alphabet, LassoWord, NGBA
from .config import config
from .ltl import (Always, And, Eventually, FalseConst, Ltl, Next, Not, Or, Prop, Release, TrueConst, Until)
from .models import MDP, MarkovChain


def make_rng(seed: Optional[int] = None, settings=None) -> np.random.Generator:
    settings = settings or config['default']
    return np.random.default_rng(settings.RANDOM_SEED if seed is None else seed)


def propositions(count: int) -> List[str]:
    return [chr(ord('a') + i) for i in range(count)]


def random_ngba(rng: np.random.Generator, num_states: int = 3, k: int = 1, num_props: int = 1,
                density: float = 0.35, acceptance: float = 0.4) -> NGBA:
    """Random NGBA; every state keeps at least one outgoing transition"""
    alphabet = Alphabet(tuple(propositions(num_props)))
    transitions = set()
    for q in range(num_states):
        for symbol in alphabet.symbols():
            for target in range(num_states):
                if rng.random() < density:
                    transitions.add((q, symbol, target))
        if not any(t[0] == q for t in transitions):
            transitions.add((q, int(rng.integers(alphabet.size)), int(rng.integers(num_states))))
    ordered = sorted(transitions)
    accepting = [frozenset(t for t in ordered if rng.random() < acceptance) for _ in range(k)]
    initial_count = 1 if rng.random() < 0.7 else int(rng.integers(1, num_states + 1))
    initial = frozenset(int(q) for q in rng.choice(num_states, size=initial_count, replace=False))
    return NGBA(alphabet, num_states, initial, frozenset(ordered), tuple(accepting))


def random_lasso(rng: np.random.Generator, alphabet: Alphabet, max_prefix: int = 6,
                 max_period: int = 6) -> LassoWord:
    prefix = rng.integers(alphabet.size, size=int(rng.integers(0, max_prefix + 1)))
    period = rng.integers(alphabet.size, size=int(rng.integers(1, max_period + 1)))
    return LassoWord(tuple(int(s) for s in prefix), tuple(int(s) for s in period))


def _distribution(rng: np.random.Generator, num_states: int, max_support: int):
    support = int(rng.integers(1, min(max_support, num_states) + 1))
    targets = sorted(int(t) for t in rng.choice(num_states, size=support, replace=False))
    weights = rng.integers(1, 5, size=support).astype(float)
    weights /= weights.sum()
    return [(t, float(w)) for t, w in zip(targets, weights)]


def _labels(rng: np.random.Generator, num_states: int, props: Sequence[str]) -> List[List[str]]:
    return [[p for p in props if rng.random() < 0.5] for _ in range(num_states)]


def random_mc(rng: np.random.Generator, num_states: int = 6, num_props: int = 1,
              max_support: int = 3) -> MarkovChain:
    props = propositions(num_props)
    rows = [_distribution(rng, num_states, max_support) for _ in range(num_states)]
    return MarkovChain(props, _labels(rng, num_states, props), {0: 1.0}, rows)


def random_mdp(rng: np.random.Generator, num_states: int = 5, num_props: int = 1,
               max_actions: int = 3, max_support: int = 3) -> MDP:
    props = propositions(num_props)
    actions = []
    for _ in range(num_states):
        count = int(rng.integers(1, max_actions + 1))
        actions.append([(f"a{i}", _distribution(rng, num_states, max_support)) for i in range(count)])
    return MDP(props, _labels(rng, num_states, props), {0: 1.0}, actions)


_UNARY = (Not, Next, Eventually, Always)
_BINARY = (And, Or, Until, Release)


def random_ltl(rng: np.random.Generator, size: int = 5, props: Sequence[str] = ('a',)) -> Ltl:
    """Random formula with at most `size` operators and leaves"""
    if size <= 1:
        draw = rng.random()
        if draw < 0.1:
            return TrueConst()
        if draw < 0.15:
            return FalseConst()
        return Prop(props[int(rng.integers(len(props)))])
    if size == 2 or rng.random() < 0.4:
        return _UNARY[int(rng.integers(len(_UNARY)))](random_ltl(rng, size - 1, props))
    left = int(rng.integers(1, size - 1))
    operator = _BINARY[int(rng.integers(len(_BINARY)))]
    return operator(random_ltl(rng, left, props), random_ltl(rng, size - 1 - left, props))
