import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Dict, Sequence, Iterable, Any

import numpy as np

from assessment.errors import (
    ScoreOutOfRangeError, EmptyCohortError, DegenerateMembershipError, InvalidScaleError, InvalidDistributionError,
    UnknownGradeError, GradeCountMismatchError
)

logger = logging.getLogger(__name__)

SCORE_MIN = 0.0
SCORE_MAX = 100.0
SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class GradeBand:
    label: str
    lower: float
    upper: float

    def to_dict(self) -> Dict[str, Any]:
        return {'label': self.label, 'lo': self.lower, 'hi': self.upper}


@dataclass(frozen=True)
class GradeScale:
    """Linguistic grades ordered worst first, each owning a half-open score interval [lower, upper).

    The best grade also owns the upper end of the scale (100%).
    """
    bands: Tuple[GradeBand, ...]

    def __post_init__(self):
        object.__setattr__(self, 'bands', tuple(self.bands))
        if len(self.bands) < 2:
            raise InvalidScaleError(f'A grade scale needs at least 2 grades, got {len(self.bands)}.')

        labels = [band.label for band in self.bands]
        if len(set(labels)) != len(labels):
            raise InvalidScaleError(f'Grade labels must be unique, got {labels}.')

        if self.bands[0].lower != SCORE_MIN or self.bands[-1].upper != SCORE_MAX:
            raise InvalidScaleError(f'Grade intervals must cover [{SCORE_MIN:g}, {SCORE_MAX:g}], got '
                                    f'[{self.bands[0].lower:g}, {self.bands[-1].upper:g}].')

        for band in self.bands:
            if not band.lower < band.upper:
                raise InvalidScaleError(f'Empty interval [{band.lower:g}, {band.upper:g}) for grade "{band.label}".')

        for previous, current in zip(self.bands, self.bands[1:]):
            if previous.upper != current.lower:
                raise InvalidScaleError(f'Intervals of "{previous.label}" and "{current.label}" must be adjacent, '
                                        f'got {previous.upper:g} and {current.lower:g}.')

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(band.label for band in self.bands)

    @property
    def n(self) -> int:
        return len(self.bands)

    def index_of(self, label: str) -> int:
        for i, band in enumerate(self.bands):
            if band.label == label:
                return i

        raise UnknownGradeError(f'Unknown grade "{label}". Known grades: {", ".join(self.labels)}.')

    def grade_for(self, score: float) -> int:
        if math.isnan(score) or not SCORE_MIN <= score <= SCORE_MAX:
            raise ScoreOutOfRangeError(f'Score {score!r} is outside [{SCORE_MIN:g}, {SCORE_MAX:g}].')

        for i, band in enumerate(self.bands):
            if band.lower <= score < band.upper:
                return i

        return self.n - 1  # Only the closed top end (100%) is left

    def to_list(self) -> List[Dict[str, Any]]:
        return [band.to_dict() for band in self.bands]

    @classmethod
    def from_records(cls, records: Iterable[Dict[str, Any]]) -> 'GradeScale':
        bands = []
        for record in records:
            try:
                bands.append(GradeBand(str(record['label']), float(record['lo']), float(record['hi'])))
            except (KeyError, TypeError, ValueError) as error:
                raise InvalidScaleError(f'Invalid grade record {record!r}: expected label, lo and hi ({error}).')

        # Files may list grades in any order
        return cls(tuple(sorted(bands, key=lambda band: band.lower)))

    @classmethod
    def from_boundaries(cls, labels: Sequence[str], boundaries: Sequence[float]) -> 'GradeScale':
        if len(boundaries) != len(labels) + 1:
            raise InvalidScaleError(f'{len(labels)} grades need {len(labels) + 1} boundaries, got {len(boundaries)}.')

        return cls(tuple(GradeBand(label, float(lower), float(upper))
                         for label, lower, upper in zip(labels, boundaries, boundaries[1:])))

    @classmethod
    def default(cls) -> 'GradeScale':
        return cls.from_boundaries(('F', 'D', 'C', 'B', 'A'), (0, 50, 60, 75, 85, 100))

    @classmethod
    def strict(cls) -> 'GradeScale':
        return cls.from_boundaries(('F', 'D', 'C', 'B', 'A'), (0, 55, 65, 80, 90, 100))


@dataclass(frozen=True)
class Cohort:
    name: str
    counts: Tuple[int, ...]
    scale: GradeScale = GradeScale.default()

    def __post_init__(self):
        object.__setattr__(self, 'counts', tuple(self.counts))
        if len(self.counts) != self.scale.n:
            raise GradeCountMismatchError(f'Cohort "{self.name}" has {len(self.counts)} counts but the scale has '
                                          f'{self.scale.n} grades.')

        for label, count in zip(self.scale.labels, self.counts):
            if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count < 0:
                raise InvalidDistributionError(f'Count for grade "{label}" in cohort "{self.name}" must be a '
                                               f'nonnegative integer, got {count!r}.')

        object.__setattr__(self, 'counts', tuple(int(count) for count in self.counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def count_of(self, label: str) -> int:
        return self.counts[self.scale.index_of(label)]

    def exact_frequencies(self) -> Tuple[Fraction, ...]:
        if self.total == 0:
            raise EmptyCohortError(f'Cohort "{self.name}" has no students.')

        return tuple(Fraction(count, self.total) for count in self.counts)

    @classmethod
    def from_grade_counts(cls, name: str, grade_counts: Dict[str, int],
                          scale: GradeScale = GradeScale.default()) -> 'Cohort':
        counts = [0] * scale.n
        for label, count in grade_counts.items():
            counts[scale.index_of(label)] += count

        return cls(name, tuple(counts), scale)


@dataclass(frozen=True, eq=False)
class Distribution:
    """Normalized frequency vector y_1..y_n, index 1 being the worst grade."""
    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        if y.ndim != 1 or y.size < 2:
            raise InvalidDistributionError(f'A distribution needs a flat vector of at least 2 values, got shape '
                                           f'{y.shape}.')
        if not np.all(np.isfinite(y)) or np.any(y < 0) or np.any(y > 1):
            raise InvalidDistributionError(f'Frequencies must lie in [0, 1], got {y.tolist()}.')
        if abs(y.sum() - 1) > SUM_TOLERANCE:
            raise InvalidDistributionError(f'Frequencies must sum to 1, got {y.sum()!r}.')

        y.setflags(write=False)
        object.__setattr__(self, 'y', y)

    def __len__(self) -> int:
        return self.y.size

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def grade_values(self) -> np.ndarray:
        return np.arange(1, self.n + 1, dtype=float)

    def is_close(self, other: 'Distribution', tolerance: float = SUM_TOLERANCE) -> bool:
        return self.n == other.n and bool(np.allclose(self.y, other.y, rtol=0, atol=tolerance))

    @classmethod
    def uniform(cls, n: int) -> 'Distribution':
        return cls(np.full(n, 1 / n))

    @classmethod
    def point_mass(cls, n: int, index: int) -> 'Distribution':
        """All mass at grade `index` (1-based, 1 = worst)."""
        if not 1 <= index <= n:
            raise InvalidDistributionError(f'Grade index {index} is outside 1..{n}.')

        y = np.zeros(n)
        y[index - 1] = 1
        return cls(y)


def classify_scores(scores: Iterable[float], scale: GradeScale = GradeScale.default(),
                    name: str = 'scores') -> Cohort:
    counts = [0] * scale.n
    for score in scores:
        counts[scale.grade_for(float(score))] += 1

    logger.debug(f'Classified {sum(counts)} scores for "{name}": {dict(zip(scale.labels, counts))}')
    return Cohort(name, tuple(counts), scale)


def to_distribution(cohort: Cohort) -> Distribution:
    if cohort.total == 0:
        raise EmptyCohortError(f'Cohort "{cohort.name}" has no students.')

    return Distribution(np.asarray(cohort.counts, dtype=float) / cohort.total)


def normalize_membership(membership: Sequence[float]) -> Distribution:
    values = np.asarray(membership, dtype=float)
    if values.ndim != 1 or not np.all(np.isfinite(values)) or np.any(values < 0):
        raise InvalidDistributionError(f'Membership degrees must be finite and nonnegative, got {values.tolist()}.')

    total = values.sum()
    if total == 0:
        raise DegenerateMembershipError('At least one membership degree must be positive.')

    return Distribution(values / total)
