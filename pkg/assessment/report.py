import json
from dataclasses import dataclass
from typing import List, Tuple, Dict, Sequence, Optional, Any

import pandas as pd
from dotmap import DotMap

from assessment.comparison import ComparisonVerdict, Characterization, Winner, characterize
from assessment.distributions import Cohort, Distribution, to_distribution
from assessment.errors import InvalidConfigError, CogRangeError
from assessment.models import (
    ModelConfig, ModelVariant, ClassicalIndex, CogPoint, model_cog, mean_value, variance, quality_of_knowledge,
    gpa_index, key_expressions, figure_extent
)
from utils.general import AssessmentJSONEncoder, round_half_away

METHODS = ('mean', 'gpa', 'rm', 'grm', 'tfam', 'tpfam')
RANGE_TOLERANCE = 1e-12


def parse_methods(text: str) -> Tuple[str, ...]:
    methods = tuple(method.strip().lower() for method in text.split(',') if method.strip())
    unknown = [method for method in methods if method not in METHODS]
    if len(methods) == 0 or len(unknown) > 0:
        raise InvalidConfigError(f'Unknown assessment methods {unknown or text!r}. Available: {", ".join(METHODS)}.')

    return tuple(method for method in METHODS if method in methods)


def _characterization_dict(characterization: Characterization) -> Dict[str, Any]:
    return {
        'label': characterization.label.value,
        'ratio': characterization.ratio,
        'half_ideal': characterization.ideal / 2,
        'heuristic': characterization.heuristic,
    }


def _check_cog_range(cog: CogPoint, config: ModelConfig) -> None:
    n, b = config.n, config.b
    if config.variant is ModelVariant.RM:
        x_range, y_range = (b / 2, b * (n - 1 / 2)), (1 / (2 * n), 1 / 2)
    else:
        x_range, y_range = (b / 2, figure_extent(config) - b / 2), (config.a / n, config.a)

    if not x_range[0] - RANGE_TOLERANCE <= cog.xc <= x_range[1] + RANGE_TOLERANCE:
        raise CogRangeError(f'{config.variant.name} X_c {cog.xc} lies outside {x_range}.')
    if not y_range[0] - RANGE_TOLERANCE <= cog.yc <= y_range[1] + RANGE_TOLERANCE:
        raise CogRangeError(f'{config.variant.name} Y_c {cog.yc} lies outside {y_range}.')


@dataclass(eq=False)
class AssessmentReport:
    cohort: Cohort
    distribution: Distribution
    config: ModelConfig
    statistics: DotMap
    results: DotMap

    @property
    def methods(self) -> List[str]:
        return list(self.results.toDict().keys())

    def to_dict(self) -> Dict[str, Any]:
        labels = self.cohort.scale.labels
        return {
            'cohort': self.cohort.name,
            'scale': self.cohort.scale.to_list(),
            'counts': dict(zip(labels, self.cohort.counts)),
            'total': self.cohort.total,
            'frequencies': dict(zip(labels, self.distribution.y.tolist())),
            'config': {'n': self.config.n, 'k': self.config.k, 'b': self.config.b},
            'statistics': self.statistics.toDict(),
            'methods': self.results.toDict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, cls=AssessmentJSONEncoder)

    def render_table(self) -> str:
        # Best grade first, as grade tables are usually printed
        grades = pd.DataFrame({
            'Grade': list(reversed(self.cohort.scale.labels)),
            'Students': list(reversed(self.cohort.counts)),
            'Frequency': [_format(value) for value in reversed(self.distribution.y.tolist())],
        })

        rows = []
        for method, result in self.results.toDict().items():
            characterization = result['characterization']
            label = characterization['label'] + (' (heuristic)' if characterization['heuristic'] else '')
            rows.append({
                'Method': method.upper(),
                'Xc / Score': _format(result['xc'] if 'xc' in result else result['score']),
                'Yc': _format(result['yc']) if 'yc' in result else '-',
                'Ratio to ideal': _format(characterization['ratio']),
                'Quality': label,
            })

        statistics = self.statistics
        lines = [
            f'Cohort: {self.cohort.name} ({self.cohort.total} students)',
            grades.to_string(index=False),
            '',
            f'Mean: {_format(statistics.mean)}  Variance: {_format(statistics.variance)}  '
            f'Quality of knowledge: {_format(statistics.quality_of_knowledge)}  GPA: {_format(statistics.gpa)}',
            f'Overlap k: {self.config.k:g}%  Base length: {self.config.b:g}',
        ]
        if len(rows) > 0:
            lines += ['', pd.DataFrame(rows).to_string(index=False)]

        return '\n'.join(lines)


def build_report(cohort: Cohort, methods: Sequence[str] = METHODS, k: float = 30.0, b: float = 1.0,
                 quality_threshold: Optional[int] = None) -> AssessmentReport:
    dist = to_distribution(cohort)
    config = ModelConfig(ModelVariant.GRM, n=dist.n, k=k, b=b)
    keys = key_expressions(dist)
    statistics = DotMap(
        mean=mean_value(dist),
        variance=variance(dist),
        quality_of_knowledge=quality_of_knowledge(dist, quality_threshold),
        gpa=gpa_index(dist),
        weighted_sum=keys.weighted_sum,
        sum_of_squares=keys.sum_of_squares,
    )

    results = DotMap()
    for method in methods:
        if method in (index.value for index in ClassicalIndex):
            selector = ClassicalIndex(method)
            score = statistics.mean if selector is ClassicalIndex.MEAN else statistics.gpa
            results[method] = DotMap(score=score,
                                     characterization=_characterization_dict(characterize(dist, selector)))
        else:
            model_config = config.with_variant(ModelVariant.from_name(method))
            cog = model_cog(dist, model_config)
            _check_cog_range(cog, model_config)
            results[method] = DotMap(xc=cog.xc, yc=cog.yc, a=model_config.a,
                                     characterization=_characterization_dict(characterize(dist, model_config)))

    return AssessmentReport(cohort, dist, config, statistics, results)


def verdict_to_dict(verdict: ComparisonVerdict, names: Tuple[str, str], config: ModelConfig) -> Dict[str, Any]:
    winner = {'first': names[0], 'second': names[1]}.get(verdict.winner.value)
    return {
        'model': config.variant.value,
        'winner': verdict.winner.value,
        'winner_name': winner,
        'basis': verdict.basis.value,
        'branch_threshold': verdict.branch_threshold,
        'groups': [
            {'name': name, 'xc': cog.xc, 'yc': cog.yc, 'sum_i_y': keys.weighted_sum,
             'sum_y_squared': keys.sum_of_squares}
            for name, cog, keys in ((names[0], verdict.first, verdict.first_keys),
                                    (names[1], verdict.second, verdict.second_keys))
        ],
        'note': verdict.note,
    }


def render_verdict(verdict: ComparisonVerdict, names: Tuple[str, str], config: ModelConfig) -> str:
    data = verdict_to_dict(verdict, names, config)
    frame = pd.DataFrame([{
        'Group': group['name'],
        'Xc': _format(group['xc']),
        'Yc': _format(group['yc']),
        'sum i*y_i': _format(group['sum_i_y']),
        'sum y_i^2': _format(group['sum_y_squared']),
    } for group in data['groups']])

    if verdict.winner is Winner.TIE:
        outcome = 'Tie'
    else:
        outcome = f'Winner: {data["winner_name"]} ({verdict.winner.value})'

    lines = [f'Model: {config.variant.name} (k={config.k:g}%, base={config.b:g})', frame.to_string(index=False),
             f'{outcome}, basis: {verdict.basis.value}']
    if verdict.note:
        lines.append(f'Note: {verdict.note}')

    return '\n'.join(lines)


def _format(value: float) -> str:
    return f'{round_half_away(value, 2):.2f}'
