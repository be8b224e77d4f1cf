"""Shared fixtures: the running example chain and automaton, the small
MDPs, and testing settings."""
from __future__ import annotations

import os

import pytest

from lazydet.automata import Alphabet, NGBA
from lazydet.config import config
from lazydet.hoa import hoa_parse
from lazydet.models import load_model
from lazydet.random_instances import make_rng, random_ngba

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")

# letters of the running example, over the propositions a, b, c
A, B, C = 1, 2, 4


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def read_fixture(name: str) -> str:
    with open(fixture_path(name), encoding="utf-8") as handle:
        return handle.read()


def fuzz_count(base: int) -> int:
    """Corpus size scaled by the testing FUZZ_SCALE, at least one"""
    return max(1, int(base * config["testing"].FUZZ_SCALE))


def enumerated_ngbas(num_states: int, k: int):
    """Fixed family of NGBAs over {a, b} for one size: sparse to complete,
    several seeds each"""
    for density in (0.2, 0.5, 1.0):
        for seed in range(4):
            yield random_ngba(make_rng(seed), num_states=num_states, k=k, num_props=2, density=density)


@pytest.fixture
def settings():
    return config["testing"]


@pytest.fixture
def rng(settings):
    return make_rng(settings=settings)


@pytest.fixture
def abc() -> Alphabet:
    return Alphabet(("a", "b", "c"))


@pytest.fixture
def b_e() -> NGBA:
    """x -a-> y in F1, x -a-> z, y -c-> x, z -b-> x in F2"""
    return hoa_parse(read_fixture("be.hoa"))


@pytest.fixture
def m_e(settings):
    """a -> c (2/3), a -> b (1/3), b -> a, c -> a; starts in a"""
    return load_model(fixture_path("me.tra"), fixture_path("me.lab"), "mc", settings)


@pytest.fixture
def choice_mdp(settings):
    """c=0 -> a=2 -> {back to b=1, stay}; b -> c; starts in b"""
    return load_model(fixture_path("choice.tra"), fixture_path("choice.lab"), "mdp", settings)


@pytest.fixture
def choice_ngba() -> NGBA:
    """x loops on a, b, c and guesses y on a; y loops on a, accepting"""
    return hoa_parse(read_fixture("choice.hoa"))


@pytest.fixture
def loop_mdp(settings):
    """m0 (labelled a) -> m1; m1 may loop or go back; starts in m1"""
    return load_model(fixture_path("loop.tra"), fixture_path("loop.lab"), "mdp", settings)


@pytest.fixture
def universal() -> NGBA:
    """One state accepting every word over {p}"""
    alphabet = Alphabet(("p",))
    transitions = frozenset((0, s, 0) for s in alphabet.symbols())
    return NGBA(alphabet, 1, frozenset({0}), transitions, (transitions,))
