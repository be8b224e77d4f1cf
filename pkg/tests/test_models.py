"""Tests for the explicit model format."""
from __future__ import annotations

import numpy as np
import pytest

from conftest import fixture_path
from lazydet.automata import Alphabet
from lazydet.exceptions import AlphabetError, InputError, ModelFormatError
from lazydet.models import MDP, MarkovChain, load_model, parse_model


class TestParseChain:
    def test_running_example(self, m_e):
        assert isinstance(m_e, MarkovChain)
        assert m_e.num_states == 3
        assert m_e.propositions == ("a", "b", "c")
        assert m_e.labels[2] == frozenset({"c"})
        assert m_e.initial == {0: 1.0}
        np.testing.assert_allclose(m_e.matrix().toarray()[0], [0, 1 / 3, 2 / 3])

    def test_label_symbols(self, m_e, abc):
        assert m_e.label_symbols(abc) == [1, 2, 4]
        assert m_e.label_symbols(Alphabet(("c",))) == [0, 0, 1]

    def test_automaton_proposition_missing_from_model(self, m_e):
        with pytest.raises(AlphabetError):
            m_e.label_symbols(Alphabet(("a", "d")))

    def test_repeated_entries_add_up(self, settings):
        model = parse_model("0 1 1/2\n0 1 1/2\n1 1 1\n", "0: a\n1:\n", settings=settings)
        assert model.distributions(0) == [((1, 1.0),)]

    def test_initial_distribution(self, settings):
        model = parse_model("#init 0:1/2 1:1/2\n0 0 1\n1 1 1\n", "0: a\n1: a\n", settings=settings)
        assert model.initial == {0: 0.5, 1: 0.5}

    def test_deadlock_state_has_no_moves(self, settings):
        model = parse_model("#states 2\n0 1 1\n", "#aps a\n", settings=settings)
        assert model.distributions(1) == []
        assert model.graph().choices[1] == []

    def test_propositions_inferred_from_labels(self, settings):
        model = parse_model("0 0 1\n", "0: q p\n", settings=settings)
        assert model.propositions == ("q", "p")


class TestParseMdp:
    def test_choice_example(self, choice_mdp):
        assert isinstance(choice_mdp, MDP)
        assert choice_mdp.initial == {1: 1.0}
        assert sorted(choice_mdp.action_names(2)) == ["back", "stay"]
        assert choice_mdp.action_names(0) == ["go"]

    def test_wrong_shape(self, settings):
        with pytest.raises(ModelFormatError, match="src action dst prob"):
            parse_model("0 1 1\n", "0: a\n", kind="mdp", settings=settings)


class TestErrors:
    @pytest.mark.parametrize("transitions, labels, state", [
        ("0 1 1/2\n1 1 1\n", "0: a\n", 0),
        ("#states 1\n0 1 1\n", "0: a\n", 1),
        ("#aps a\n0 0 1\n", "0: b\n", 0),
    ])
    def test_error_names_state(self, settings, transitions, labels, state):
        with pytest.raises(ModelFormatError) as excinfo:
            parse_model(transitions, labels, settings=settings)
        assert excinfo.value.state == state

    @pytest.mark.parametrize("transitions", ["0 0 3/2\n", "0 0 x\n", "-1 0 1\n", "#init 0:1/2\n0 0 1\n"])
    def test_rejected(self, settings, transitions):
        with pytest.raises(ModelFormatError):
            parse_model(transitions, "0: a\n", settings=settings)

    def test_unknown_kind(self, settings):
        with pytest.raises(InputError):
            parse_model("0 0 1\n", "0: a\n", kind="ctmc", settings=settings)

    def test_missing_file(self, settings):
        with pytest.raises(InputError, match="cannot read model"):
            load_model(fixture_path("missing.tra"), fixture_path("me.lab"), settings=settings)

    def test_label_count_mismatch(self):
        with pytest.raises(ModelFormatError):
            MarkovChain(("a",), [["a"]], {0: 1.0}, [[(0, 1.0)], [(1, 1.0)]])
