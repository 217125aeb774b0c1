import pytest
from hypothesis import given, settings

from conftest import VOCAB1, VOCAB2, close_formula, formula_strategy
from unarydc import logic
from unarydc.logic import (
    And,
    Eq,
    Exists,
    Forall,
    Neq,
    NegPred,
    Or,
    ParseError,
    Pred,
    format_formula,
    free_variables,
    negate,
    parse,
    qrank,
    size,
    to_prenex,
)
from unarydc.semantics import satisfies_profile
from unarydc.structures import enumerate_profiles


class TestMetrics:
    def test_simplest_definer_has_size_two(self):
        assert size(Forall(1, Pred(0, 1))) == 2

    def test_negation_is_free(self):
        f = And(Pred(0, 1), NegPred(1, 1))
        assert size(f) == 3

    def test_two_distinct_witnesses(self):
        f = Exists(1, Exists(2, And(Neq(1, 2), And(Pred(0, 1), Pred(0, 2)))))
        assert size(f) == 7

    def test_qrank_nesting_vs_siblings(self):
        nested = Exists(1, Forall(2, Pred(0, 1)))
        siblings = And(Exists(1, Pred(0, 1)), Forall(1, Pred(0, 1)))
        assert qrank(nested) == 2
        assert qrank(siblings) == 1

    def test_deep_formulas_do_not_overflow(self):
        f = Pred(0, 1)
        for v in range(2, 5002):
            f = Exists(v, f)
        assert size(f) == 5001
        assert qrank(f) == 5000
        assert free_variables(f) == frozenset({1})
        assert size(negate(f)) == 5001


class TestNegate:
    def test_atom(self):
        assert negate(Pred(0, 1)) == NegPred(0, 1)

    def test_pushes_through_quantifier(self):
        f = Exists(1, And(Pred(0, 1), Eq(1, 2)))
        assert negate(f) == Forall(1, Or(NegPred(0, 1), Neq(1, 2)))

    @given(formula_strategy())
    @settings(max_examples=300)
    def test_involution_and_size(self, f):
        assert negate(negate(f)) == f
        assert size(negate(f)) == size(f)


class TestPrenex:
    def test_renames_across_conjunction(self):
        f = And(Exists(1, Pred(0, 1)), Exists(1, Pred(1, 1)))
        pf = to_prenex(f)
        assert pf.prefix == (("E", 1), ("E", 2))
        assert pf.matrix == And(Pred(0, 1), Pred(1, 2))
        assert pf.size == size(f) == 5

    def test_quantifier_free_input(self):
        f = And(Pred(0, 1), Eq(1, 2))
        pf = to_prenex(f)
        assert pf.prefix == ()
        assert pf.matrix == f

    @given(formula_strategy())
    def test_size_preserved_and_qrank_bounds(self, f):
        pf = to_prenex(f)
        assert pf.size == size(f)
        assert len(pf.prefix) >= qrank(f)
        assert qrank(pf.to_formula()) == len(pf.prefix)

    @given(formula_strategy(k=2, max_var=2, max_leaves=4))
    @settings(max_examples=60)
    def test_semantic_equivalence_on_profiles(self, f):
        sentence = close_formula(f)
        prenexed = to_prenex(sentence).to_formula()
        for n in (1, 2, 3):
            for p in enumerate_profiles(VOCAB2, n):
                assert satisfies_profile(VOCAB2, p, sentence) == satisfies_profile(
                    VOCAB2, p, prenexed
                )

    def test_synthesized_formulas_survive_prenexing(self):
        from unarydc.synthesis import synthesize_full_profile

        cases = [(VOCAB1, n) for n in range(1, 6)] + [(VOCAB2, n) for n in range(1, 4)]
        for vocab, n in cases:
            profiles = list(enumerate_profiles(vocab, n))
            for target in profiles:
                f = synthesize_full_profile(vocab, target)
                pf = to_prenex(f)
                assert pf.size == size(f)
                g = pf.to_formula()
                for p in profiles:
                    assert satisfies_profile(vocab, p, f) == satisfies_profile(vocab, p, g)


class TestGrammar:
    def test_parse_forall(self):
        assert parse("Ax1. P(x1)", VOCAB1) == Forall(1, Pred(0, 1))

    def test_negation_eliminated_at_parse_time(self):
        assert parse("!(Ex1. P(x1))", VOCAB1) == Forall(1, NegPred(0, 1))

    def test_binary_with_inequality(self):
        assert parse("(P(x1) & x1 != x2)", VOCAB1) == And(Pred(0, 1), Neq(1, 2))

    def test_format_examples(self):
        assert format_formula(Forall(1, Pred(0, 1)), VOCAB1) == "Ax1. P(x1)"
        f = And(Pred(0, 1), Or(NegPred(1, 2), Eq(1, 2)))
        assert format_formula(f, VOCAB2) == "(P(x1) & (!Q(x2) | x1 = x2))"

    def test_whitespace_insignificant(self):
        assert parse(" Ex1.( P(x1)&Q(x1) ) ", VOCAB2) == Exists(
            1, And(Pred(0, 1), Pred(1, 1))
        )

    def test_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse("(P(x1) &\n R(x1))", VOCAB1)
        assert err.value.line == 2
        assert "unknown predicate" in str(err.value)

    @pytest.mark.parametrize(
        "text", ["", "P(x1", "Ax1 P(x1)", "x1 =", "(P(x1) & Q(x1)", "P(x0)", "P(y1)"]
    )
    def test_rejects_malformed(self, text):
        with pytest.raises(ParseError):
            parse(text, VOCAB2)

    def test_predicate_named_like_quantifier(self):
        vocab = logic.Vocabulary(("Ex2",))
        assert parse("Ex1. Ex2(x1)", vocab) == Exists(1, Pred(0, 1))

    @given(formula_strategy())
    @settings(max_examples=300)
    def test_round_trip(self, f):
        assert parse(format_formula(f, VOCAB2), VOCAB2) == f
