import math

import pytest

from conftest import VOCAB2
from unarydc.entropy import (
    EntropyBoundViolation,
    boltzmann_entropy,
    boltzmann_entropy_d,
    entropy_gap_bound,
    entropy_gap_check,
    f_threshold,
    fo_bound_curves,
    fod_bound_steps,
    h_threshold,
    region_membership,
    shannon_entropy,
)
from unarydc.structures import ClassTuple, TypeProfile, enumerate_profiles


class TestShannon:
    def test_uniform_distribution(self):
        assert shannon_entropy(TypeProfile((2, 2, 2, 2))) == pytest.approx(2.0)

    def test_single_type_is_zero(self):
        assert shannon_entropy(TypeProfile((0, 0, 0, 9))) == 0.0

    def test_quarter_three_quarters(self):
        assert shannon_entropy(TypeProfile((1, 3))) == pytest.approx(0.8112781244591)


class TestBoltzmann:
    def test_empty_relations_model(self):
        assert boltzmann_entropy(TypeProfile((7, 0))) == 0.0

    def test_split_pair(self):
        assert boltzmann_entropy(TypeProfile((1, 1))) == pytest.approx(1.0)

    def test_multinomial_log(self):
        assert boltzmann_entropy(TypeProfile((2, 2))) == pytest.approx(math.log2(6))

    def test_capped_class(self):
        # completions (1,2) and (2,1) give 3 + 3 structures
        assert boltzmann_entropy_d(ClassTuple(1, 3, (1, 1))) == pytest.approx(math.log2(6))

    def test_huge_classes_stay_accurate(self):
        # n = 400 balanced: far past float factorials, exact big-int log
        p = TypeProfile((100, 100, 100, 100))
        value = boltzmann_entropy(p)
        assert 0 < value < 2 * 400
        n2 = TypeProfile((200, 200))
        expected = 400 - 0.5 * math.log2(math.pi * 200)  # Stirling, error O(1/n)
        assert boltzmann_entropy(n2) == pytest.approx(expected, abs=0.01)


class TestGapBound:
    def test_split_pair_report(self):
        report = entropy_gap_check(TypeProfile((1, 1)))
        assert report.shannon == pytest.approx(1.0)
        assert report.boltzmann == pytest.approx(1.0)
        assert report.gap == pytest.approx(0.5)
        assert report.gap_bound == pytest.approx(0.9405256873184514)
        assert report.gap < report.gap_bound

    def test_balanced_ten(self):
        report = entropy_gap_check(TypeProfile((5, 5)))
        assert report.gap < report.gap_bound

    def test_zero_counts_allowed_without_assertion(self):
        report = entropy_gap_check(TypeProfile((0, 4)))
        assert report.shannon == 0.0

    def test_bound_formula(self):
        assert entropy_gap_bound(2, 2) == pytest.approx(
            math.log2(math.sqrt(4 * math.pi)) / 2
            - math.log2(math.e) / 48
            + 2 * math.log2(math.e) / 50
        )

    def test_violation_type_exists(self):
        assert issubclass(EntropyBoundViolation, AssertionError)


class TestThresholdFunctions:
    def test_limits_at_zero(self):
        assert f_threshold(4, 0.0) == 0.0
        assert h_threshold(0.0) == 0.0

    def test_f_rejects_outside_domain(self):
        with pytest.raises(ValueError):
            f_threshold(4, 0.25)
        with pytest.raises(ValueError):
            h_threshold(0.6)

    def test_upper_branch_meets_ceiling(self):
        # at p = 1/(3(t-1)) the descending branch hits 2n + c_tau
        t, n = 4, 1000
        p = 1 / (3 * (t - 1))
        assert 3 * n * (1 - (t - 1) * p) == pytest.approx(2 * n)
        # and the two-type branch reaches the ceiling at p = 1/3
        assert 6 * n * (1 / 3) == pytest.approx(2 * n)

    def test_h_is_entropy_of_two_type_profile(self):
        p = 0.25
        n = 1000
        profile = TypeProfile((0, 0, int(n * p), int(n * (1 - p))))
        assert h_threshold(p) == pytest.approx(shannon_entropy(profile), abs=1e-9)


class TestCurves:
    def test_row_grid_and_domains(self):
        rows = fo_bound_curves(VOCAB2, 1000, samples=8)
        assert len(rows) == 9
        assert rows[0].p == 0.0 and rows[-1].p == 0.5
        for row in rows:
            if row.p < 1 / 4:
                assert row.f is not None and row.upper_f is not None
            else:
                assert row.f is None and row.upper_f is None

    def test_landmarks(self):
        n = 1000
        rows = fo_bound_curves(VOCAB2, n, samples=4)  # p grid: 0, .125, .25, .375, .5
        by_p = {row.p: row for row in rows}
        assert by_p[0.125].upper_h == 6 * n * 0.125 + VOCAB2.c_tau
        assert by_p[0.25].upper_h == pytest.approx(3 * n / 2 + VOCAB2.c_tau)
        assert by_p[0.0].lower == 0.0  # clipped from -3
        assert by_p[0.0].upper_f == 3 * n + VOCAB2.c_tau

    def test_clip_toggle(self):
        rows = fo_bound_curves(VOCAB2, 1000, samples=4, clip=False)
        assert rows[0].lower == -3.0


class TestSteps:
    def test_first_step_entropies(self):
        rows = fod_bound_steps(VOCAB2, 100, 10)
        assert len(rows) == 9
        assert rows[0].upper_entropy == pytest.approx(math.log2(100))
        assert rows[0].lower_entropy == pytest.approx(math.log2(100 * 99 * 98))

    def test_reproduces_published_step_plot(self):
        # step data for n = 100, t = 4, d = 10, one decimal place
        rows = fod_bound_steps(VOCAB2, 100, 10)
        lower = [round(r.lower_entropy, 1) for r in rows]
        upper = [round(r.upper_entropy, 1) for r in rows]
        assert upper == [6.6, 12.3, 17.3, 21.9, 26.2, 30.2, 33.9, 37.4, 40.8]
        published = [19.9, 36.6, 51.1, 65.0, 77.3, 88.8, 99.3, 109.2, 118.4]
        # h = 3 is off by 0.4 in the published plot data; exact value is 51.5
        assert lower[2] == 51.5
        for ours, theirs in zip(lower, published):
            assert abs(ours - theirs) <= 0.45

    def test_bound_columns(self):
        rows = fod_bound_steps(VOCAB2, 100, 10)
        for r in rows:
            assert r.lower_bound == 3 * r.h - 3
            assert r.upper_bound == 6 * r.h + VOCAB2.c_tau


class TestRegion:
    def test_single_type_profile_inside(self):
        diag = region_membership(VOCAB2, TypeProfile((0, 0, 0, 60)))
        assert diag.inside
        assert diag.shannon == 0.0

    def test_balanced_profile_inside_near_tight(self):
        n, t = 60, 4
        diag = region_membership(VOCAB2, TypeProfile((15, 15, 15, 15)))
        assert diag.inside
        assert diag.shannon == pytest.approx(2.0)
        assert diag.upper == 3 * n // t + VOCAB2.c_tau
        assert diag.lower == 3 * (n // t) - 3

    def test_small_sweep(self):
        for p in enumerate_profiles(VOCAB2, 12):
            assert region_membership(VOCAB2, p, samples=64).inside, p.counts
