import pytest

from conftest import VOCAB1, VOCAB2
from unarydc.logic import qrank, size
from unarydc.semantics import defines, defines_class, satisfies_profile
from unarydc.structures import (
    ClassTuple,
    TypeProfile,
    UnaryStructure,
    enumerate_class_tuples,
    enumerate_profiles,
    representative,
)
from unarydc.synthesis import (
    at_least_formula,
    at_most_formula,
    global_upper_bound,
    global_upper_bound_d,
    synthesize_d,
    synthesize_full,
    synthesize_full_profile,
    type_formula,
    upper_bound,
    upper_bound_d,
)


def profiles_with_support(vocab, n, support):
    for p in enumerate_profiles(vocab, n):
        if {j for j, c in enumerate(p.counts) if c > 0} == set(support):
            yield p


class TestTypeFormula:
    def test_single_predicate(self):
        f = type_formula(VOCAB1, 1, 1)
        assert size(f) == 1

    def test_all_negative(self):
        f = type_formula(VOCAB2, 0, 1)
        assert size(f) == 3  # two literals, one connective

    def test_size_is_2k_minus_1(self):
        for j in range(VOCAB2.t):
            assert size(type_formula(VOCAB2, j, 1)) == 2 * VOCAB2.k - 1


class TestAtLeast:
    def test_semantic_contract(self):
        f = at_least_formula(VOCAB1, (0, 1), (2, 2))
        for n in (4, 5):
            for p in profiles_with_support(VOCAB1, n, (0, 1)):
                expected = p.counts[0] >= 2 and p.counts[1] >= 2
                assert satisfies_profile(VOCAB1, p, f) == expected, p

    def test_partial_counts_ignore_suffix_types(self):
        # constrain only the first (least frequent) type
        f = at_least_formula(VOCAB1, (0, 1), (2,))
        for p in profiles_with_support(VOCAB1, 5, (0, 1)):
            assert satisfies_profile(VOCAB1, p, f) == (p.counts[0] >= 2), p

    def test_size_bound(self):
        f = at_least_formula(VOCAB1, (0, 1), (2, 3))
        assert size(f) <= 3 * 3 + 4 * 1 * 2 - 3 == 14

    def test_degenerate_single_count_is_omitted(self):
        assert at_least_formula(VOCAB1, (0, 1), (1, 1)) is None

    @pytest.mark.parametrize("mbar", [(), (2, 1), (0, 1)])
    def test_rejects_bad_sequences(self, mbar):
        with pytest.raises(ValueError):
            at_least_formula(VOCAB1, (0, 1), mbar)


class TestAtMost:
    def test_semantic_contract(self):
        f = at_most_formula(VOCAB1, (0, 1), (1, 2))
        for n in (3, 4, 5):
            for p in profiles_with_support(VOCAB1, n, (0, 1)):
                expected = p.counts[0] <= 1 and p.counts[1] <= 2
                assert satisfies_profile(VOCAB1, p, f) == expected, p

    def test_size_bound(self):
        f = at_most_formula(VOCAB1, (0, 1), (1, 2))
        assert size(f) <= 3 * 2 + 6 * 1 * 2 - 2 * 1 == 16

    def test_full_domain_count_is_vacuous(self):
        f = at_most_formula(VOCAB1, (1,), (5,))
        p = TypeProfile((0, 5))
        assert satisfies_profile(VOCAB1, p, f)

    def test_quantifier_rank_is_m_r_plus_one(self):
        f = at_most_formula(VOCAB2, (0, 1, 2), (1, 2, 3))
        assert qrank(f) == 4


class TestSynthesizeFull:
    def test_full_domain_model(self):
        s = UnaryStructure(VOCAB2, (3,) * 10)
        f = synthesize_full(s)
        assert defines(s, f)
        assert size(f) <= VOCAB2.c_tau

    def test_two_singletons(self):
        s = representative(VOCAB1, TypeProfile((1, 1)))
        f = synthesize_full(s)
        assert defines(s, f)
        assert size(f) <= 6 * 1 + VOCAB1.c_tau

    def test_one_third_two_thirds_bound(self):
        s = representative(VOCAB1, TypeProfile((2, 4)))
        f = synthesize_full(s)
        assert defines(s, f)
        assert size(f) <= min(3 * 4, 6 * 2) + VOCAB1.c_tau == 42

    def test_soundness_and_certification_small(self):
        for vocab in (VOCAB1, VOCAB2):
            for n in range(1, 6):
                for p in enumerate_profiles(vocab, n):
                    s = representative(vocab, p)
                    f = synthesize_full(s)
                    assert size(f) <= upper_bound(s), p
                    assert defines(s, f), p

    def test_size_depends_only_on_count_multiset(self):
        # permuting which type carries which count cannot change the size
        # (every type formula costs 2k - 1); experiment code caches on this
        for vocab in (VOCAB1, VOCAB2):
            for n in range(1, 7):
                for p in enumerate_profiles(vocab, n):
                    canon = TypeProfile(tuple(sorted(p.counts)))
                    assert size(synthesize_full_profile(vocab, p)) == size(
                        synthesize_full_profile(vocab, canon)
                    ), p


class TestSynthesizeD:
    def test_single_small_type_plus_bulk(self):
        for d in (2, 3, 4):
            c = ClassTuple(d, 10, (0, 0, 1, d))
            f = synthesize_d(VOCAB2, c)
            assert size(f) <= 6 + VOCAB2.c_tau
            assert qrank(f) <= d

    def test_two_threshold_types(self):
        d = 3
        c = ClassTuple(d, 12, (0, d - 1, d, d))
        f = synthesize_d(VOCAB2, c)
        assert size(f) <= 6 * d - 3 + VOCAB2.c_tau
        assert qrank(f) <= d

    def test_defines_class_small(self):
        c = ClassTuple(2, 5, (1, 2))
        f = synthesize_d(VOCAB1, c)
        assert defines_class(VOCAB1, c, f)
        assert qrank(f) <= 2

    def test_soundness_small(self):
        for vocab in (VOCAB1, VOCAB2):
            for n in range(1, 6):
                for d in range(1, 5):
                    for c in enumerate_class_tuples(vocab, n, d):
                        f = synthesize_d(vocab, c)
                        assert qrank(f) <= d, c
                        assert size(f) <= upper_bound_d(vocab, c), c
                        assert defines_class(vocab, c, f), c


class TestBounds:
    def test_closed_form_values(self):
        assert upper_bound(representative(VOCAB1, TypeProfile((2, 4)))) == 42
        assert upper_bound(representative(VOCAB1, TypeProfile((5, 5)))) == 45

    def test_single_type_convention(self):
        assert upper_bound(representative(VOCAB1, TypeProfile((0, 7)))) == VOCAB1.c_tau

    def test_global_ceiling(self):
        for n in range(1, 30):
            for p in enumerate_profiles(VOCAB1, n):
                assert upper_bound(representative(VOCAB1, p)) <= global_upper_bound(VOCAB1, n)

    def test_d_bounds(self):
        assert upper_bound_d(VOCAB2, ClassTuple(5, 20, (0, 0, 1, 5))) == 6 + VOCAB2.c_tau
        assert (
            upper_bound_d(VOCAB2, ClassTuple(5, 20, (0, 4, 5, 5)))
            == 3 * 5 + 3 * 4 + VOCAB2.c_tau
        )
        assert global_upper_bound_d(VOCAB2, 5) == 27 + VOCAB2.c_tau

    def test_synthesized_size_within_global_d_bound(self):
        for d in (1, 2, 3):
            for c in enumerate_class_tuples(VOCAB1, 6, d):
                assert size(synthesize_d(VOCAB1, c)) <= global_upper_bound_d(VOCAB1, d)
