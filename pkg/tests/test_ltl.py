"""Tests for LTL parsing, normal forms and the tableau translation."""
from __future__ import annotations

import pytest

from conftest import fuzz_count
from lazydet.automata import Alphabet, LassoWord, lasso_member_ngba
from lazydet.exceptions import AlphabetError, LtlSyntaxError
from lazydet.ltl import (Always, And, Eventually, FalseConst, Next, Not, Or, Prop, Release, TrueConst, Until,
                         atomic_propositions, eval_ltl_on_lasso, formula_size, is_nnf, negate, parse_ltl,
                         to_nnf, to_string, translate_ltl_to_ngba)
from lazydet.random_instances import random_lasso, random_ltl

a, b, c = Prop("a"), Prop("b"), Prop("c")


# ======================== Parsing ========================

class TestParse:
    @pytest.mark.parametrize("text, expected", [
        ("G F a", Always(Eventually(a))),
        ("GFa", Always(Eventually(a))),
        ("a U (b U c)", Until(a, Until(b, c))),
        ("a U b U c", Until(a, Until(b, c))),
        ("a & b | c", Or(And(a, b), c)),
        ("!a R X b", Release(Not(a), Next(b))),
        ("true | false", Or(TrueConst(), FalseConst())),
        ("(a | b) & c", And(Or(a, b), c)),
    ])
    def test_examples(self, text, expected):
        assert parse_ltl(text) == expected

    def test_doubled_operator(self):
        with pytest.raises(LtlSyntaxError) as excinfo:
            parse_ltl("a UU b")
        assert excinfo.value.position == 3

    @pytest.mark.parametrize("text", ["a &", "(a | b", "a b", "Y a", "a # b", ""])
    def test_rejected(self, text):
        with pytest.raises(LtlSyntaxError):
            parse_ltl(text)

    def test_to_string_is_a_fixpoint(self):
        for text in ["G F a", "a U (b R !c)", "X (a & b) | F G c"]:
            printed = to_string(parse_ltl(text))
            assert to_string(parse_ltl(printed)) == printed

    def test_to_string_shape(self):
        assert to_string(parse_ltl("G F a")) == "G(F(a))"
        assert to_string(parse_ltl("a U b")) == "(a U b)"


# ======================== Normal forms ========================

class TestNormalForms:
    def test_negated_until(self):
        assert to_nnf(parse_ltl("!(a U b)")) == Release(Not(a), Not(b))

    def test_negated_always(self):
        assert to_nnf(negate(Always(a))) == Eventually(Not(a))

    def test_double_negation(self):
        assert to_nnf(Not(Not(a))) == a

    def test_is_nnf(self):
        assert is_nnf(parse_ltl("!a U G b"))
        assert not is_nnf(parse_ltl("!(a & b)"))

    def test_helpers(self):
        formula = parse_ltl("a U (b & X c)")
        assert atomic_propositions(formula) == ["a", "b", "c"]
        assert formula_size(formula) == 6


# ======================== Translation ========================

class TestTranslation:
    def test_true_is_universal(self):
        ngba = translate_ltl_to_ngba(TrueConst(), ["a"])
        assert ngba.num_states == 1
        assert ngba.k == 1
        assert lasso_member_ngba(ngba, LassoWord((0,), (1, 0)))

    def test_false_is_empty(self):
        ngba = translate_ltl_to_ngba(FalseConst(), ["a"])
        assert not lasso_member_ngba(ngba, LassoWord((), (1,)))

    def test_one_accepting_set_per_until(self):
        ngba = translate_ltl_to_ngba(parse_ltl("(a U b) & F c"))
        assert ngba.k == 2

    def test_infinitely_often(self):
        ngba = translate_ltl_to_ngba(parse_ltl("G F a"))
        assert lasso_member_ngba(ngba, LassoWord((0,), (0, 1)))
        assert not lasso_member_ngba(ngba, LassoWord((1, 1), (0,)))

    def test_undeclared_proposition(self):
        with pytest.raises(AlphabetError):
            translate_ltl_to_ngba(parse_ltl("a U b"), ["a"])

    def test_agrees_with_lasso_evaluation(self, rng):
        props = ("a", "b")
        alphabet = Alphabet(props)
        for _ in range(fuzz_count(60)):
            formula = random_ltl(rng, int(rng.integers(1, 9)), props)
            ngba = translate_ltl_to_ngba(formula, props)
            for _ in range(10):
                word = random_lasso(rng, alphabet)
                assert lasso_member_ngba(ngba, word) == eval_ltl_on_lasso(formula, word, alphabet), \
                    to_string(formula)


class TestLassoEvaluation:
    alphabet = Alphabet(("a",))

    @pytest.mark.parametrize("text, word, expected", [
        ("G F a", LassoWord((0,), (1, 0)), True),
        ("G F a", LassoWord((1,), (0,)), False),
        ("F G !a", LassoWord((1,), (0,)), True),
        ("a U X a", LassoWord((1, 0), (1,)), True),
        ("X a", LassoWord((0,), (0,)), False),
        ("false R a", LassoWord((), (1,)), True),
    ])
    def test_examples(self, text, word, expected):
        assert eval_ltl_on_lasso(parse_ltl(text), word, self.alphabet) is expected

    def test_unknown_proposition(self):
        with pytest.raises(AlphabetError):
            eval_ltl_on_lasso(parse_ltl("F b"), LassoWord((), (1,)), self.alphabet)
