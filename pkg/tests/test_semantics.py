import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from conftest import VOCAB1, VOCAB2, close_formula, formula_strategy
from unarydc import oracle
from unarydc.logic import And, Eq, Exists, Forall, Neq, NegPred, Or, Pred, negate, parse
from unarydc.semantics import (
    NonSentenceError,
    UnboundVariableError,
    defines,
    defines_class,
    evaluate,
    satisfies_profile,
)
from unarydc.structures import (
    ClassTuple,
    TypeProfile,
    UnaryStructure,
    enumerate_profiles,
    profile_of,
    representative,
)

M1 = UnaryStructure(VOCAB2, (3,) * 10)  # P = Q = whole domain, n = 10


class TestEvaluate:
    def test_full_domain_conjunction(self):
        f = parse("Ax1. (P(x1) & Q(x1))", VOCAB2)
        assert evaluate(M1, {}, f)

    def test_reflexive_equality_on_nonempty_domain(self):
        f = Exists(1, Eq(1, 1))
        for s in (M1, UnaryStructure(VOCAB1, (0,))):
            assert evaluate(s, {}, f)

    def test_two_witness_counting(self):
        f = Exists(1, Exists(2, And(Neq(1, 2), And(Pred(0, 1), Pred(0, 2)))))
        assert evaluate(representative(VOCAB1, TypeProfile((1, 2))), {}, f)
        assert not evaluate(representative(VOCAB1, TypeProfile((2, 1))), {}, f)

    def test_unbound_variable_is_an_error(self):
        with pytest.raises(UnboundVariableError):
            evaluate(M1, {}, Pred(0, 1))

    def test_assignment_is_used(self):
        s = UnaryStructure(VOCAB1, (0, 1))
        assert evaluate(s, {1: 2}, Pred(0, 1))
        assert not evaluate(s, {1: 1}, Pred(0, 1))

    @given(formula_strategy(max_var=2, max_leaves=4), st.integers(1, 3), st.integers(0, 80))
    @settings(max_examples=80)
    def test_negation_complements(self, f, n, pick):
        structures = [UnaryStructure(VOCAB2, tt) for tt in [(pick % 4,) * n]]
        assignment = {v: (v + pick) % n + 1 for v in range(1, 3)}
        for s in structures:
            assert evaluate(s, assignment, negate(f)) == (not evaluate(s, assignment, f))


class TestSatisfiesProfile:
    def test_universal_on_pure_profile(self):
        f = Forall(1, Pred(0, 1))
        assert satisfies_profile(VOCAB1, TypeProfile((0, 10)), f)
        assert not satisfies_profile(VOCAB1, TypeProfile((1, 9)), f)

    def test_rejects_non_sentence(self):
        with pytest.raises(NonSentenceError):
            satisfies_profile(VOCAB1, TypeProfile((1, 1)), Pred(0, 1))

    def test_agrees_with_evaluate_exhaustively(self):
        # every enumerated sentence up to size 5, every structure of every
        # profile with n <= 4: orbit evaluation matches the naive evaluator
        budget = oracle.EnumerationBudget(max_size=5)
        sentences = [s.to_formula() for s in oracle.enumerate_sentences(VOCAB1, budget)]
        for n in (1, 2, 3, 4):
            structures = [
                UnaryStructure(VOCAB1, tuple((i >> e) & 1 for e in range(n)))
                for i in range(2 ** n)
            ]
            for f in sentences:
                for s in structures:
                    assert satisfies_profile(VOCAB1, profile_of(s), f) == evaluate(s, {}, f)

    @given(formula_strategy(k=2, max_var=3, max_leaves=5))
    @settings(max_examples=60)
    def test_agrees_with_evaluate_random_k2(self, f):
        sentence = close_formula(f)
        for p in enumerate_profiles(VOCAB2, 3):
            s = representative(VOCAB2, p)
            assert satisfies_profile(VOCAB2, p, sentence) == evaluate(s, {}, sentence)

    def test_isomorphism_invariance(self):
        f = Exists(1, Forall(2, Or(Eq(1, 2), NegPred(0, 2))))
        scrambles = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        values = {evaluate(UnaryStructure(VOCAB1, tt), {}, f) for tt in scrambles}
        assert len(values) == 1


class TestDefines:
    def test_full_domain_model(self):
        assert defines(M1, parse("Ax1. (P(x1) & Q(x1))", VOCAB2))

    def test_existential_does_not_separate(self):
        s = representative(VOCAB1, TypeProfile((1, 1)))
        assert not defines(s, Exists(1, Pred(0, 1)))

    def test_both_types_witnessed(self):
        s = representative(VOCAB1, TypeProfile((1, 1)))
        f = And(Exists(1, Pred(0, 1)), Exists(2, NegPred(0, 2)))
        assert defines(s, f)

    def test_definability_is_profile_invariant(self):
        f = And(Exists(1, Pred(0, 1)), Exists(2, NegPred(0, 2)))
        a = UnaryStructure(VOCAB1, (0, 1))
        b = UnaryStructure(VOCAB1, (1, 0))
        assert defines(a, f) and defines(b, f)


class TestDefinesClass:
    def test_capped_class_of_pure_model(self):
        c = ClassTuple(2, 5, (0, 2))
        assert defines_class(VOCAB1, c, Forall(1, Pred(0, 1)))

    def test_rejects_excessive_quantifier_rank(self):
        c = ClassTuple(1, 3, (1, 1))
        deep = Exists(1, Exists(2, And(Pred(0, 1), Pred(0, 2))))
        with pytest.raises(ValueError):
            defines_class(VOCAB1, c, deep)

    def test_isomorphism_class_collapse(self):
        # when the tuple sums to n, class definability equals definability
        s = representative(VOCAB1, TypeProfile((1, 1)))
        c = ClassTuple(5, 2, (1, 1))
        f = And(Exists(1, Pred(0, 1)), Exists(2, NegPred(0, 2)))
        assert defines_class(VOCAB1, c, f) == defines(s, f)
