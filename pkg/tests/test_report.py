import json

import pytest

from assessment.comparison import compare
from assessment.distributions import Cohort, to_distribution
from assessment.errors import InvalidConfigError, CogRangeError
from assessment.models import ModelConfig, ModelVariant, CogPoint
from assessment.report import METHODS, parse_methods, build_report, verdict_to_dict, render_verdict, _check_cog_range


def test_parse_methods_keeps_canonical_order():
    assert parse_methods('GRM, mean') == ('mean', 'grm')
    with pytest.raises(InvalidConfigError):
        parse_methods('grm,fuzzy')
    with pytest.raises(InvalidConfigError):
        parse_methods(' , ')


def test_report_holds_every_method(shelter):
    report = build_report(shelter)

    assert report.methods == list(METHODS)
    assert report.statistics.mean == pytest.approx(74 / 38)
    assert report.results.grm.xc == pytest.approx(1.16, abs=0.005)
    assert report.results.tfam.yc == pytest.approx(report.results.grm.yc * 2 / 5)
    assert report.results.rm.characterization.label == 'unsatisfactory'
    assert report.results.mean.characterization.heuristic


def test_report_json_keeps_full_precision(regular):
    data = json.loads(build_report(regular, methods=('gpa', 'grm')).to_json())

    assert data['cohort'] == 'regular'
    assert data['counts'] == {'F': 20, 'D': 3, 'C': 5, 'B': 1, 'A': 0}
    assert sum(data['frequencies'].values()) == pytest.approx(1, abs=1e-12)
    assert data['methods']['gpa']['score'] == pytest.approx(16 / 29, abs=1e-15)
    assert set(data['methods']) == {'gpa', 'grm'}
    assert data['config'] == {'n': 5, 'k': 30.0, 'b': 1.0}


def test_table_rounds_to_two_decimals(shelter):
    table = build_report(shelter).render_table()

    assert 'Cohort: shelter (38 students)' in table
    for value in ('1.95', '0.95', '1.45', '1.16'):
        assert value in table
    assert 'unsatisfactory (heuristic)' in table


def test_ideal_cohort():
    report = build_report(Cohort('ideal', (0, 0, 0, 0, 1)), methods=('rm', 'grm'))

    assert report.results.rm.xc == pytest.approx(4.5)
    assert (report.results.grm.xc, report.results.grm.yc) == pytest.approx((3.3, 0.5))
    assert report.results.grm.characterization.label == 'satisfactory'


def test_report_on_base_ten(shelter):
    report = build_report(shelter, methods=('grm',), k=30, b=10)

    assert report.results.grm.xc == pytest.approx(11.63, abs=0.005)


def test_verdict_rendering(class_1, class_2):
    config = ModelConfig()
    verdict = compare(to_distribution(class_1), to_distribution(class_2), config)

    data = verdict_to_dict(verdict, ('Class I', 'Class II'), config)
    text = render_verdict(verdict, ('Class I', 'Class II'), config)

    assert data['winner'] == 'first' and data['winner_name'] == 'Class I'
    assert data['basis'] == 'secondary-yc-high-branch'
    assert data['groups'][0]['sum_y_squared'] == pytest.approx(26 / 36)
    assert 'Winner: Class I (first), basis: secondary-yc-high-branch' in text
    assert '0.72' in text and '0.56' in text


def test_tie_rendering(shelter):
    dist = to_distribution(shelter)
    config = ModelConfig()

    text = render_verdict(compare(dist, dist), ('a', 'b'), config)

    assert 'Tie, basis: exact-tie' in text
    assert verdict_to_dict(compare(dist, dist), ('a', 'b'), config)['winner_name'] is None


@pytest.mark.parametrize('cog, config', [
    (CogPoint(3.5, 0.3), ModelConfig()),
    (CogPoint(1.9, 0.6), ModelConfig()),
    (CogPoint(4.6, 0.2), ModelConfig(ModelVariant.RM)),
])
def test_cog_outside_its_range_is_an_error(cog, config):
    with pytest.raises(CogRangeError):
        _check_cog_range(cog, config)


def test_range_check_accepts_the_extreme_cohorts():
    _check_cog_range(CogPoint(3.3, 0.5), ModelConfig())
    _check_cog_range(CogPoint(0.5, 0.1), ModelConfig())
    _check_cog_range(CogPoint(4.5, 0.1), ModelConfig(ModelVariant.RM))
