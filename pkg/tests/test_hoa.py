"""Tests for HOA parsing and emission."""
from __future__ import annotations

import pytest

from conftest import A, B, fuzz_count
from lazydet.automata import AcceptanceKind, Alphabet, DeterministicAutomaton, NGBA, RabinMark
from lazydet.exceptions import HoaSyntaxError, UnsupportedAutomatonError
from lazydet.hoa import hoa_emit, hoa_parse
from lazydet.random_instances import random_ngba
from lazydet.subset import build_subset

MINIMAL = """HOA: v1
States: 1
Start: 0
AP: 0
Acceptance: 1 Inf(0)
--BODY--
State: 0
[t] 0 {0}
--END--
"""


def _header(*lines: str) -> str:
    return "\n".join(["HOA: v1", "States: 1", "Start: 0", 'AP: 1 "p"', *lines])


class TestParse:
    def test_minimal(self):
        ngba = hoa_parse(MINIMAL)
        assert isinstance(ngba, NGBA)
        assert ngba.k == 1
        assert ngba.transitions == frozenset({(0, 0, 0)})
        assert ngba.accepting_sets[0] == ngba.transitions

    def test_running_example(self, b_e):
        assert b_e.k == 2
        assert b_e.accepting_sets[0] == frozenset({(0, A, 1)})
        assert b_e.accepting_sets[1] == frozenset({(2, B, 0)})

    def test_alias_and_disjunction(self):
        text = _header("Alias: @p 0", "Acceptance: 1 Inf(0)", "--BODY--",
                       "State: 0", "[@p | !@p] 0 {0}", "--END--")
        ngba = hoa_parse(text)
        assert ngba.transitions == frozenset({(0, 0, 0), (0, 1, 0)})

    def test_state_based_acceptance_rejected(self):
        text = _header("Acceptance: 1 Inf(0)", "properties: state-acc", "--BODY--",
                       "State: 0 {0}", "[t] 0", "--END--")
        with pytest.raises(UnsupportedAutomatonError, match="state-based acceptance"):
            hoa_parse(text)

    def test_state_marks_rejected_without_property(self):
        text = _header("Acceptance: 1 Inf(0)", "--BODY--", "State: 0 {0}", "[t] 0", "--END--")
        with pytest.raises(UnsupportedAutomatonError, match="state-based acceptance"):
            hoa_parse(text)

    def test_implicit_labels_rejected(self):
        text = _header("Acceptance: 1 Inf(0)", "--BODY--", "State: 0", "0 {0}", "--END--")
        with pytest.raises(UnsupportedAutomatonError):
            hoa_parse(text)

    def test_unknown_acceptance_name(self):
        text = _header("acc-name: Streett 1", "Acceptance: 2 Fin(0)|Inf(1)", "--BODY--",
                       "State: 0", "[t] 0", "--END--")
        with pytest.raises(UnsupportedAutomatonError):
            hoa_parse(text)

    def test_too_many_propositions(self):
        aps = " ".join(f'"p{i}"' for i in range(17))
        text = "\n".join(["HOA: v1", "States: 1", "Start: 0", f"AP: 17 {aps}",
                          "Acceptance: 1 Inf(0)", "--BODY--", "State: 0", "--END--"])
        with pytest.raises(UnsupportedAutomatonError):
            hoa_parse(text)

    def test_syntax_error_has_position(self):
        text = _header("Acceptance: 1 Inf(0)", "--BODY--", "State: 0", "[0 0", "--END--")
        with pytest.raises(HoaSyntaxError) as excinfo:
            hoa_parse(text)
        assert excinfo.value.line >= 1
        assert excinfo.value.column >= 1

    def test_parity(self):
        text = _header("acc-name: parity min even 3", "Acceptance: 3 Inf(0) | (Fin(1) & Inf(2))",
                       "--BODY--", "State: 0", "[0] 0 {1}", "[!0] 0 {2}", "--END--")
        automaton = hoa_parse(text)
        assert isinstance(automaton, DeterministicAutomaton)
        assert automaton.kind is AcceptanceKind.PARITY
        assert automaton.step(0, 1) == (0, 1)
        assert automaton.step(0, 0) == (0, 2)

    def test_nondeterministic_rabin_rejected(self):
        text = _header("acc-name: Rabin 1", "Acceptance: 2 Fin(0)&Inf(1)", "--BODY--",
                       "State: 0", "[t] 0 {1}", "[0] 0", "--END--")
        with pytest.raises(UnsupportedAutomatonError, match="nondeterministic"):
            hoa_parse(text)


class TestEmit:
    def test_running_example_reparses(self, b_e):
        again = hoa_parse(hoa_emit(b_e))
        assert again.num_states == 3
        assert len(again.transitions) == 4
        assert again.k == 2
        assert again == b_e

    def test_empty_automaton(self):
        alphabet = Alphabet(())
        ngba = NGBA(alphabet, 1, frozenset({0}), frozenset(), (frozenset(),))
        text = hoa_emit(ngba)
        assert "--BODY--" in text
        assert hoa_parse(text).transitions == frozenset()

    def test_subset_automaton(self, b_e):
        subset = build_subset(b_e)
        text = hoa_emit(subset.as_deterministic(), name="subset")
        assert "States: 2" in text
        assert hoa_parse(text).num_states == 2

    def test_rabin_marks_survive(self):
        alphabet = Alphabet(("p",))
        mark = RabinMark(frozenset({0}), frozenset({1}))
        automaton = DeterministicAutomaton(alphabet, 1, 0, {(0, 0): (0, mark), (0, 1): (0, RabinMark())},
                                           AcceptanceKind.RABIN, 2)
        again = hoa_parse(hoa_emit(automaton))
        assert again.step(0, 0) == (0, mark)
        assert again.step(0, 1) == (0, RabinMark())

    def test_random_roundtrip(self, rng):
        for _ in range(fuzz_count(100)):
            ngba = random_ngba(rng, num_states=int(rng.integers(1, 7)), k=int(rng.integers(1, 3)),
                               num_props=2)
            assert hoa_parse(hoa_emit(ngba)) == ngba

