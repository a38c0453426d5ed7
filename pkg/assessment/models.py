import enum
import logging
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from assessment.distributions import Distribution
from assessment.errors import InvalidConfigError, GradeCountMismatchError, ModelMisuseError

logger = logging.getLogger(__name__)


class ModelVariant(enum.Enum):
    RM = 'rm'
    GRM = 'grm'
    TFAM = 'tfam'
    TPFAM = 'tpfam'

    def __str__(self):
        return self.value

    @property
    def is_overlapping(self) -> bool:
        return self is not ModelVariant.RM

    @property
    def default_coefficient(self) -> Optional[float]:
        return _DEFAULT_COEFFICIENTS[self]

    @classmethod
    def from_name(cls, name: str) -> 'ModelVariant':
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise InvalidConfigError(f'Unknown model "{name}". Available: {", ".join(v.value for v in cls)}.')


_DEFAULT_COEFFICIENTS = {
    ModelVariant.RM: None,
    ModelVariant.GRM: 1 / 2,
    ModelVariant.TFAM: 1 / 5,
    ModelVariant.TPFAM: 3 / 7,
}


class ClassicalIndex(enum.Enum):
    MEAN = 'mean'
    GPA = 'gpa'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ModelConfig:
    variant: ModelVariant = ModelVariant.GRM
    n: int = 5
    k: float = 30.0
    a: Optional[float] = None
    b: float = 1.0

    def __post_init__(self):
        if self.a is None and self.variant.is_overlapping:
            object.__setattr__(self, 'a', self.variant.default_coefficient)

        if self.n < 2:
            raise InvalidConfigError(f'At least 2 grades are needed, got n={self.n}.')
        if not 0 < self.k < 50:
            raise InvalidConfigError(f'Overlap percentage k must lie in (0, 50), got {self.k:g}.')
        if self.a is not None and not self.a > 0:
            raise InvalidConfigError(f'Coefficient a must be positive, got {self.a:g}.')
        if not self.b > 0:
            raise InvalidConfigError(f'Base length b must be positive, got {self.b:g}.')

    @property
    def overlap(self) -> float:
        return self.k / 100

    def with_variant(self, variant: ModelVariant) -> 'ModelConfig':
        return replace(self, variant=variant, a=None)


Selector = Union[ModelConfig, ClassicalIndex]


@dataclass(frozen=True)
class CogPoint:
    xc: float
    yc: float


@dataclass(frozen=True)
class KeyExpressions:
    weighted_sum: float  # sum of i * y_i, drives X_c
    sum_of_squares: float  # sum of y_i ** 2, drives Y_c


@dataclass(frozen=True)
class TriangleFrame:
    worst: CogPoint
    balanced: CogPoint
    ideal: CogPoint

    def contains(self, point: CogPoint, tolerance: float = 1e-12) -> bool:
        """Barycentric sign test: the point is inside or on the edge of the triangle."""
        vertices = (self.worst, self.balanced, self.ideal)
        signs = []
        for start, end in zip(vertices, vertices[1:] + vertices[:1]):
            cross = (end.xc - start.xc) * (point.yc - start.yc) - (end.yc - start.yc) * (point.xc - start.xc)
            signs.append(cross)

        return all(sign >= -tolerance for sign in signs) or all(sign <= tolerance for sign in signs)


def _check_grade_count(dist: Distribution, config: ModelConfig) -> None:
    if dist.n != config.n:
        raise GradeCountMismatchError(f'Distribution has {dist.n} grades but the model is configured for {config.n}.')


def mean_value(dist: Distribution) -> float:
    return float(np.dot(dist.grade_values, dist.y))


def variance(dist: Distribution) -> float:
    values = dist.grade_values
    return float(np.dot(values ** 2, dist.y) - np.dot(values, dist.y) ** 2)


def quality_of_knowledge(dist: Distribution, threshold_index: Optional[int] = None) -> float:
    """Share of the group at grade `threshold_index` (1-based) or better; defaults to the second best grade."""
    if threshold_index is None:
        threshold_index = dist.n - 1
    if not 1 <= threshold_index <= dist.n:
        raise InvalidConfigError(f'Threshold grade index {threshold_index} is outside 1..{dist.n}.')

    return float(dist.y[threshold_index - 1:].sum())


def gpa_index(dist: Distribution) -> float:
    return float(np.dot(dist.grade_values - 1, dist.y))


def key_expressions(dist: Distribution) -> KeyExpressions:
    return KeyExpressions(float(np.dot(dist.grade_values, dist.y)), float(np.dot(dist.y, dist.y)))


def grade_weights(selector: Selector, n: int = 5) -> np.ndarray:
    """Coefficient of each y_i in the model's score; `n` is only read for the classical indices."""
    if isinstance(selector, ClassicalIndex):
        values = np.arange(1, n + 1, dtype=float)
        return values if selector is ClassicalIndex.MEAN else values - 1

    i = np.arange(1, selector.n + 1, dtype=float)
    if selector.variant is ModelVariant.RM:
        return selector.b * (2 * i - 1) / 2

    return selector.b * ((1 - selector.overlap) * (i - 1) + 1 / 2)


def rm_cog(dist: Distribution, b: float = 1.0) -> CogPoint:
    if not b > 0:
        raise InvalidConfigError(f'Base length b must be positive, got {b:g}.')

    i = dist.grade_values
    return CogPoint(float(b / 2 * np.dot(2 * i - 1, dist.y)), float(np.dot(dist.y, dist.y) / 2))


def overlapping_cog(dist: Distribution, config: ModelConfig = ModelConfig()) -> CogPoint:
    if not config.variant.is_overlapping:
        raise ModelMisuseError('The rectangular model has no overlap; use rm_cog for it.')
    _check_grade_count(dist, config)

    return CogPoint(float(np.dot(grade_weights(config), dist.y)), float(config.a * np.dot(dist.y, dist.y)))


def model_cog(dist: Distribution, config: ModelConfig) -> CogPoint:
    if config.variant is ModelVariant.RM:
        _check_grade_count(dist, config)
        return rm_cog(dist, config.b)

    return overlapping_cog(dist, config)


def model_cogs(heights: np.ndarray, config: ModelConfig) -> np.ndarray:
    """Closed-form COGs of many distributions at once, one per row; returns shape (rows, 2)."""
    heights = np.atleast_2d(np.asarray(heights, dtype=float))
    if heights.shape[1] != config.n:
        raise GradeCountMismatchError(f'Distributions have {heights.shape[1]} grades but the model is configured '
                                      f'for {config.n}.')

    coefficient = config.a if config.variant.is_overlapping else 1 / 2
    return np.stack([heights @ grade_weights(config), coefficient * (heights ** 2).sum(axis=1)], axis=1)


def triangle_frame(config: ModelConfig = ModelConfig()) -> TriangleFrame:
    return TriangleFrame(
        worst=model_cog(Distribution.point_mass(config.n, 1), config),
        balanced=model_cog(Distribution.uniform(config.n), config),
        ideal=model_cog(Distribution.point_mass(config.n, config.n), config)
    )


def overlapped_extent(n: int, k: float, b: float = 1.0) -> float:
    return b * (n - (n - 1) * k / 100)


def figure_extent(config: ModelConfig = ModelConfig()) -> float:
    if config.variant is ModelVariant.RM:
        return overlapped_extent(config.n, 0, config.b)

    return overlapped_extent(config.n, config.k, config.b)
