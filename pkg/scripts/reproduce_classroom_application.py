import sys
from pathlib import Path
from typing import TextIO

from assessment.comparison import compare, characterize
from assessment.distributions import to_distribution
from assessment.geometry import exact_key_expressions
from assessment.models import (
    ModelConfig, ModelVariant, ClassicalIndex, model_cog, mean_value, gpa_index, grade_weights
)
from assessment.readers import CohortReader
from utils.general import round_half_away

COHORTS_PATH = Path(__file__).resolve().parent.parent / 'data' / 'cohorts'


def print_assessment(name: str, path: Path, out: TextIO) -> None:
    cohort = CohortReader.read(path, name=name)
    dist = to_distribution(cohort)
    rm, grm = ModelConfig(ModelVariant.RM), ModelConfig(ModelVariant.GRM)

    out.write(f'{name} class ({cohort.total} students)\n')
    out.write(f'  (i) mean: {round_half_away(mean_value(dist)):.2f}\n')
    out.write(f'  (ii) GPA: {round_half_away(gpa_index(dist)):.2f} '
              f'({characterize(dist, ClassicalIndex.GPA).label})\n')
    out.write(f'  (iii) RM X_c: {round_half_away(model_cog(dist, rm).xc):.2f} ({characterize(dist, rm).label})\n')
    out.write(f'  (iv) GRM X_c: {round_half_away(model_cog(dist, grm).xc):.2f} ({characterize(dist, grm).label})\n')


def print_equal_gpa_example(out: TextIO) -> None:
    first = CohortReader.read(COHORTS_PATH / 'class_1.csv', name='Class I')
    second = CohortReader.read(COHORTS_PATH / 'class_2.csv', name='Class II')
    for cohort in (first, second):
        weighted_sum, sum_of_squares = exact_key_expressions(cohort)
        out.write(f'{cohort.name}: GPA {weighted_sum - 1}, sum i*y_i {weighted_sum}, sum y_i^2 {sum_of_squares}\n')

    verdict = compare(to_distribution(first), to_distribution(second))
    winner = {'first': first.name, 'second': second.name}.get(verdict.winner.value, 'nobody')
    out.write(f'Better performance: {winner} ({verdict.basis})\n')


def print_grade_coefficients(out: TextIO) -> None:
    selectors = {'RM': ModelConfig(ModelVariant.RM), 'GPA': ClassicalIndex.GPA, 'GRM': ModelConfig(ModelVariant.GRM)}
    out.write('Coefficients of the higher grades: model, B, A\n')
    for name, selector in selectors.items():
        weights = grade_weights(selector)
        out.write(f'  {name}: {weights[-2]:.1f}, {weights[-1]:.1f}\n')


def main(out: TextIO = sys.stdout) -> None:
    print_assessment('Shelter', COHORTS_PATH / 'shelter.csv', out)
    print_assessment('Regular', COHORTS_PATH / 'regular.csv', out)
    out.write('\n')
    print_equal_gpa_example(out)
    out.write('\n')
    print_grade_coefficients(out)


if __name__ == '__main__':
    main()
