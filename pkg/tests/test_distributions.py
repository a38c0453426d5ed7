from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from assessment.distributions import (
    GradeScale, Cohort, Distribution, classify_scores, to_distribution, normalize_membership
)
from assessment.errors import (
    ScoreOutOfRangeError, EmptyCohortError, DegenerateMembershipError, InvalidScaleError, InvalidDistributionError,
    UnknownGradeError, GradeCountMismatchError
)
from strategies import grade_counts, distributions


def test_default_scale_orders_grades_worst_first():
    scale = GradeScale.default()

    assert scale.labels == ('F', 'D', 'C', 'B', 'A')
    assert scale.n == 5


@pytest.mark.parametrize('score, label', [
    (0, 'F'), (49.99, 'F'), (50, 'D'), (59.9, 'D'), (60, 'C'), (74.99, 'C'), (75, 'B'), (84.5, 'B'), (85, 'A'),
    (100, 'A'),
])
def test_grade_for_uses_half_open_intervals(score, label):
    scale = GradeScale.default()

    assert scale.labels[scale.grade_for(score)] == label


def test_strict_scale_moves_boundaries_up():
    scale = GradeScale.strict()

    assert scale.labels[scale.grade_for(87)] == 'B'
    assert scale.labels[scale.grade_for(54)] == 'F'


@pytest.mark.parametrize('score', [-0.1, 100.01, float('nan')])
def test_grade_for_rejects_scores_outside_the_scale(score):
    with pytest.raises(ScoreOutOfRangeError):
        GradeScale.default().grade_for(score)


def test_from_records_sorts_by_lower_bound():
    records = [{'label': 'pass', 'lo': 50, 'hi': 100}, {'label': 'fail', 'lo': 0, 'hi': 50}]

    assert GradeScale.from_records(records).labels == ('fail', 'pass')


@pytest.mark.parametrize('records', [
    [{'label': 'fail', 'lo': 0, 'hi': 40}, {'label': 'pass', 'lo': 50, 'hi': 100}],
    [{'label': 'fail', 'lo': 0, 'hi': 50}, {'label': 'fail', 'lo': 50, 'hi': 100}],
    [{'label': 'all', 'lo': 0, 'hi': 100}],
    [{'label': 'fail', 'lo': 0, 'hi': 50}, {'label': 'pass', 'lo': 50, 'hi': 90}],
    [{'label': 'fail', 'lo': 0}, {'label': 'pass', 'lo': 50, 'hi': 100}],
])
def test_invalid_scales_are_rejected(records):
    with pytest.raises(InvalidScaleError):
        GradeScale.from_records(records)


def test_unknown_grade_is_named_in_the_error():
    with pytest.raises(UnknownGradeError, match='"E"'):
        GradeScale.default().index_of('E')


def test_cohort_from_grade_counts_maps_labels(shelter):
    assert shelter.counts == (18, 9, 6, 5, 0)
    assert shelter.total == 38
    assert shelter.count_of('B') == 5


def test_cohort_rejects_wrong_number_of_counts():
    with pytest.raises(GradeCountMismatchError):
        Cohort('short', (1, 2, 3))


@pytest.mark.parametrize('counts', [(1, 2, 3, 4, -1), (1, 2, 3, 4, 0.5), (True, 0, 0, 0, 1)])
def test_cohort_rejects_invalid_counts(counts):
    with pytest.raises(InvalidDistributionError):
        Cohort('bad', counts)


def test_empty_cohort_has_no_distribution():
    cohort = Cohort('empty', (0, 0, 0, 0, 0))

    with pytest.raises(EmptyCohortError):
        to_distribution(cohort)
    with pytest.raises(EmptyCohortError):
        cohort.exact_frequencies()


def test_exact_frequencies(class_1):
    assert class_1.exact_frequencies() == (0, 0, Fraction(1, 6), 0, Fraction(5, 6))


def test_to_distribution_matches_shelter_frequencies(shelter_dist):
    np.testing.assert_allclose(shelter_dist.y, [18 / 38, 9 / 38, 6 / 38, 5 / 38, 0])


def test_classify_scores():
    cohort = classify_scores([12, 50, 84.5, 85, 100, 99], name='quiz')

    assert cohort.name == 'quiz'
    assert cohort.counts == (1, 1, 0, 1, 3)


def test_distribution_is_read_only():
    dist = Distribution.uniform(5)

    with pytest.raises(ValueError):
        dist.y[0] = 1


@pytest.mark.parametrize('values', [[1.0], [0.5, 0.6], [-0.1, 1.1], [0.5, float('nan')], [[0.5, 0.5]]])
def test_invalid_distributions_are_rejected(values):
    with pytest.raises(InvalidDistributionError):
        Distribution(np.array(values))


def test_point_mass_is_one_based():
    np.testing.assert_array_equal(Distribution.point_mass(5, 5).y, [0, 0, 0, 0, 1])
    with pytest.raises(InvalidDistributionError):
        Distribution.point_mass(5, 0)


def test_normalize_membership():
    np.testing.assert_allclose(normalize_membership([2, 1, 1]).y, [0.5, 0.25, 0.25])


@pytest.mark.parametrize('membership', [[0, 0, 0], [1, -1, 1]])
def test_normalize_membership_rejects_degenerate_input(membership):
    with pytest.raises((DegenerateMembershipError, InvalidDistributionError)):
        normalize_membership(membership)


def test_all_zero_membership_is_degenerate():
    with pytest.raises(DegenerateMembershipError):
        normalize_membership([0, 0, 0, 0, 0])


@given(grade_counts())
def test_frequencies_sum_to_one(counts):
    dist = to_distribution(Cohort('sample', tuple(counts)))

    assert abs(dist.y.sum() - 1) <= 1e-12
    assert sum(Cohort('sample', tuple(counts)).exact_frequencies()) == 1


@given(distributions())
def test_normalize_membership_keeps_normalized_input(dist):
    again = normalize_membership(dist.y)

    assert np.allclose(again.y, dist.y, rtol=0, atol=1e-15)
    assert np.allclose(normalize_membership(again.y).y, again.y, rtol=0, atol=1e-15)
