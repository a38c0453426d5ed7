import enum
import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import List, Dict, Optional

from assessment.distributions import Distribution
from assessment.errors import GradeCountMismatchError
from assessment.models import (
    ModelConfig, ModelVariant, ClassicalIndex, Selector, CogPoint, KeyExpressions, model_cog, key_expressions,
    mean_value, gpa_index, figure_extent
)

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-9
BRANCH_SLACK = 1e-12


class Winner(enum.Enum):
    FIRST = 'first'
    SECOND = 'second'
    TIE = 'tie'

    def __str__(self):
        return self.value

    def swapped(self) -> 'Winner':
        return {Winner.FIRST: Winner.SECOND, Winner.SECOND: Winner.FIRST, Winner.TIE: Winner.TIE}[self]


class VerdictBasis(enum.Enum):
    PRIMARY_XC = 'primary-xc'
    SECONDARY_HIGH = 'secondary-yc-high-branch'
    SECONDARY_LOW = 'secondary-yc-low-branch'
    EXACT_TIE = 'exact-tie'

    def __str__(self):
        return self.value


class Label(enum.Enum):
    SATISFACTORY = 'satisfactory'
    UNSATISFACTORY = 'unsatisfactory'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ComparisonVerdict:
    winner: Winner
    basis: VerdictBasis
    first: CogPoint
    second: CogPoint
    first_keys: KeyExpressions
    second_keys: KeyExpressions
    branch_threshold: float
    note: Optional[str] = None


@dataclass(frozen=True)
class Characterization:
    label: Label
    ratio: float
    score: float
    ideal: float
    heuristic: bool = False  # Midpoint rule applied to the mean value, outside the model criteria


def branch_threshold(config: ModelConfig) -> float:
    """X_c at which the secondary criterion switches from "lower Y_c wins" to "greater Y_c wins"."""
    if config.variant is ModelVariant.RM:
        return model_cog(Distribution.point_mass(config.n, config.n), config).xc / 2

    return figure_extent(config) / 2


def _branch_pivot(config: ModelConfig) -> float:
    # Same switch point expressed on the key expression sum(i * y_i), so the branch cannot drift with k or b
    n = config.n
    if config.variant is ModelVariant.RM:
        return (2 * n + 1) / 4

    return (n + 1) / 2


def compare(first: Distribution, second: Distribution, config: ModelConfig = ModelConfig(),
            eps: float = DEFAULT_EPS) -> ComparisonVerdict:
    if first.n != second.n:
        raise GradeCountMismatchError(f'Cannot compare groups over {first.n} and {second.n} grades.')
    if eps < 0:
        raise ValueError(f'Tolerance must be nonnegative, got {eps:g}.')

    first_cog, second_cog = model_cog(first, config), model_cog(second, config)
    first_keys, second_keys = key_expressions(first), key_expressions(second)
    verdict = dict(first=first_cog, second=second_cog, first_keys=first_keys, second_keys=second_keys,
                   branch_threshold=branch_threshold(config))

    # X_c increases strictly with sum(i * y_i) for every model, so the tolerance applies there and the
    # verdict cannot change with k or b
    if abs(first_keys.weighted_sum - second_keys.weighted_sum) > eps:
        winner = Winner.FIRST if first_keys.weighted_sum > second_keys.weighted_sum else Winner.SECOND
        logger.debug(f'{config.variant}: {winner} wins on X_c ({first_cog.xc:.6f} vs {second_cog.xc:.6f})')
        return ComparisonVerdict(winner, VerdictBasis.PRIMARY_XC, **verdict)

    # Y_c = a * sum(y_i ** 2) with a > 0, so the key expression decides for every overlapping variant alike
    shared = (first_keys.weighted_sum + second_keys.weighted_sum) / 2
    high_branch = shared >= _branch_pivot(config) - BRANCH_SLACK
    difference = first_keys.sum_of_squares - second_keys.sum_of_squares

    if abs(difference) <= eps:
        note = None
        if not first.is_close(second):
            note = 'Distributions differ but share both key expressions; the criterion does not separate them.'
        logger.debug(f'{config.variant}: tie on both coordinates')
        return ComparisonVerdict(Winner.TIE, VerdictBasis.EXACT_TIE, note=note, **verdict)

    if high_branch:
        winner = Winner.FIRST if difference > 0 else Winner.SECOND
        basis = VerdictBasis.SECONDARY_HIGH
    else:
        winner = Winner.FIRST if difference < 0 else Winner.SECOND
        basis = VerdictBasis.SECONDARY_LOW

    logger.debug(f'{config.variant}: equal X_c, {winner} wins on Y_c ({basis})')
    return ComparisonVerdict(winner, basis, **verdict)


def rank(groups: Dict[str, Distribution], config: ModelConfig = ModelConfig(),
         eps: float = DEFAULT_EPS) -> List[List[str]]:
    """Orders groups best first by repeated pairwise comparison; tied groups share a place."""
    def compare_groups(name_1: str, name_2: str) -> int:
        winner = compare(groups[name_1], groups[name_2], config, eps).winner
        return {Winner.FIRST: -1, Winner.SECOND: 1, Winner.TIE: 0}[winner]

    places: List[List[str]] = []
    for name in sorted(groups, key=cmp_to_key(compare_groups)):
        if places and compare_groups(places[-1][0], name) == 0:
            places[-1].append(name)
        else:
            places.append([name])

    return places


def characterize(dist: Distribution, selector: Selector = ModelConfig()) -> Characterization:
    ideal_dist = Distribution.point_mass(dist.n, dist.n)
    if isinstance(selector, ClassicalIndex):
        measure = mean_value if selector is ClassicalIndex.MEAN else gpa_index
        score, ideal = measure(dist), measure(ideal_dist)
    else:
        score, ideal = model_cog(dist, selector).xc, model_cog(ideal_dist, selector).xc

    label = Label.SATISFACTORY if score >= ideal / 2 else Label.UNSATISFACTORY
    return Characterization(label, score / ideal, score, ideal, heuristic=selector is ClassicalIndex.MEAN)
