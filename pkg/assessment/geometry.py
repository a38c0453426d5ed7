"""Independent recomputation of centers of gravity from the figures themselves.

Every figure is a finite union of axis-aligned rectangles, so its moments are computed exactly piece by
piece instead of by quadrature. Where two grade rectangles overlap, the shared ground is kept twice
(multiplicity 2): a score in a common part belongs to both grades.
"""
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple, Dict, Iterator, Iterable, Sequence, Optional, Any, TextIO

import numpy as np
import tqdm

from assessment.distributions import Cohort, Distribution, normalize_membership
from assessment.errors import DegenerateFigureError, ModelMisuseError
from assessment.models import ModelConfig, ModelVariant, CogPoint, model_cog, model_cogs
from utils.general import AssessmentJSONEncoder, set_random_seed

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RegionPiece:
    left: float
    right: float
    bottom: float
    top: float
    multiplicity: int = 1

    @property
    def width(self) -> float:
        return self.right - self.left

    @property
    def height(self) -> float:
        return self.top - self.bottom

    @property
    def mass(self) -> float:
        return self.multiplicity * self.width * self.height

    @property
    def x_moment(self) -> float:
        return self.mass * (self.left + self.right) / 2

    @property
    def y_moment(self) -> float:
        return self.mass * (self.bottom + self.top) / 2

    def contains(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x >= self.left) & (x < self.right) & (y >= self.bottom) & (y < self.top)


@dataclass(frozen=True)
class WeightedRegion:
    pieces: Tuple[RegionPiece, ...]

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(self.pieces))
        for piece in self.pieces:
            if piece.multiplicity < 1 or piece.width < 0 or piece.height < 0:
                raise DegenerateFigureError(f'Invalid region piece {piece}.')

    @property
    def mass(self) -> float:
        return sum(piece.mass for piece in self.pieces)

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        return (min(piece.left for piece in self.pieces), max(piece.right for piece in self.pieces),
                min(piece.bottom for piece in self.pieces), max(piece.top for piece in self.pieces))


@dataclass(frozen=True)
class FigureLayout:
    """Elementary x intervals of a figure and, for each, the grades whose rectangles cover it."""
    lefts: np.ndarray
    rights: np.ndarray
    cover: np.ndarray

    @classmethod
    def from_bases(cls, bases: Sequence[Tuple[float, float]]) -> 'FigureLayout':
        breakpoints = sorted({point for base in bases for point in base})
        intervals = list(zip(breakpoints, breakpoints[1:]))
        cover = [[start <= left and right <= end for start, end in bases] for left, right in intervals]
        return cls(np.array([left for left, _ in intervals]), np.array([right for _, right in intervals]),
                   np.array(cover, dtype=bool))


@dataclass(frozen=True)
class ValidationRecord:
    model: ModelVariant
    n: int
    k: float
    b: float
    distribution: Tuple[float, ...]
    closed_form: CogPoint
    oracle: CogPoint
    tolerance: float = DEFAULT_TOLERANCE
    delta_x: float = field(init=False)
    delta_y: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'delta_x', abs(self.closed_form.xc - self.oracle.xc))
        object.__setattr__(self, 'delta_y', abs(self.closed_form.yc - self.oracle.yc))

    @property
    def passed_x(self) -> bool:
        return self.delta_x <= self.tolerance

    @property
    def passed_y(self) -> bool:
        return self.delta_y <= self.tolerance

    @property
    def passed(self) -> bool:
        return self.passed_x and self.passed_y

    def to_dict(self) -> Dict[str, Any]:
        return {
            'model': self.model.value,
            'n': self.n,
            'k': self.k,
            'b': self.b,
            'distribution': list(self.distribution),
            'closed_form': [self.closed_form.xc, self.closed_form.yc],
            'oracle': [self.oracle.xc, self.oracle.yc],
            'delta': [self.delta_x, self.delta_y],
            'pass': self.passed,
        }

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict(), cls=AssessmentJSONEncoder)


@dataclass(frozen=True)
class SweepSummary:
    total: int
    failures: int
    max_delta_x: float
    max_delta_y: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def rectangle_bases(config: ModelConfig) -> List[Tuple[float, float]]:
    """Horizontal base of every grade rectangle, worst grade first."""
    shift = 1 if config.variant is ModelVariant.RM else 1 - config.overlap
    return [(config.b * shift * i, config.b * shift * i + config.b) for i in range(config.n)]


def figure_layout(config: ModelConfig) -> FigureLayout:
    if config.variant not in (ModelVariant.RM, ModelVariant.GRM):
        raise ModelMisuseError(f'No geometric construction is available for {config.variant.name}; '
                               f'only RM and GRM figures can be integrated.')

    return FigureLayout.from_bases(rectangle_bases(config))


def build_rm_figure(dist: Distribution, b: float = 1.0) -> WeightedRegion:
    # One bar per grade, kept even when its height is zero
    return WeightedRegion(tuple(RegionPiece(b * i, b * (i + 1), 0.0, float(height))
                                for i, height in enumerate(dist.y)))


def build_grm_figure(dist: Distribution, config: ModelConfig = ModelConfig()) -> WeightedRegion:
    if not config.variant.is_overlapping:
        raise ModelMisuseError('The overlapped figure needs an overlapping model configuration.')

    layout = figure_layout(ModelConfig(ModelVariant.GRM, config.n, config.k, b=config.b))
    pieces = []
    for left, right, covered in zip(layout.lefts.tolist(), layout.rights.tolist(), layout.cover):
        heights = sorted(float(height) for height in dist.y[covered])
        # Horizontal bands of the stack: the band under the lowest bar is covered by every bar
        bottom = 0.0
        for j, height in enumerate(heights):
            if height > bottom:
                pieces.append(RegionPiece(left, right, bottom, height, multiplicity=len(heights) - j))
                bottom = height

    return WeightedRegion(tuple(pieces))


def integrate_cog(region: WeightedRegion) -> CogPoint:
    mass = region.mass
    if not mass > 0:
        raise DegenerateFigureError('The figure has no area, its center of gravity is undefined.')

    x_moment = sum(piece.x_moment for piece in region.pieces)
    y_moment = sum(piece.y_moment for piece in region.pieces)
    return CogPoint(x_moment / mass, y_moment / mass)


def integrate_cogs(heights: np.ndarray, layout: FigureLayout) -> np.ndarray:
    """Centers of gravity of many figures sharing one layout; `heights` holds one distribution per row.

    Returns an array of shape (rows, 2) with X_c and Y_c. The bands are the same as in `build_grm_figure`:
    within an interval the covering heights are sorted and the band below the j-th lowest is shared by the
    bars from j on.
    """
    heights = np.atleast_2d(np.asarray(heights, dtype=float))
    tops = np.sort(np.where(layout.cover, heights[:, np.newaxis, :], 0.0), axis=-1)
    bottoms = np.concatenate([np.zeros(tops.shape[:-1] + (1,)), tops[..., :-1]], axis=-1)
    multiplicity = np.arange(tops.shape[-1], 0, -1)

    band_mass = multiplicity * (tops - bottoms) * (layout.rights - layout.lefts)[:, np.newaxis]
    mass = band_mass.sum(axis=(1, 2))
    if not np.all(mass > 0):
        raise DegenerateFigureError('A figure has no area, its center of gravity is undefined.')

    centers = (layout.lefts + layout.rights)[:, np.newaxis] / 2
    x_moment = (band_mass * centers).sum(axis=(1, 2))
    y_moment = (band_mass * (tops + bottoms) / 2).sum(axis=(1, 2))
    return np.stack([x_moment / mass, y_moment / mass], axis=1)


def monte_carlo_cog(region: WeightedRegion, samples: int = 10 ** 6, seed: int = 0) -> CogPoint:
    """Density weighted uniform sampling over the bounding box; a demonstration, not an acceptance check."""
    rng = set_random_seed(seed)
    x_min, x_max, y_min, y_max = region.bounds
    x = rng.uniform(x_min, x_max, samples)
    y = rng.uniform(y_min, y_max, samples)

    density = np.zeros(samples)
    for piece in region.pieces:
        density += piece.multiplicity * piece.contains(x, y)

    if not density.sum() > 0:
        raise DegenerateFigureError('No sample landed inside the figure.')

    return CogPoint(float(np.dot(density, x) / density.sum()), float(np.dot(density, y) / density.sum()))


def build_figure(dist: Distribution, config: ModelConfig) -> WeightedRegion:
    if config.variant is ModelVariant.RM:
        return build_rm_figure(dist, config.b)
    elif config.variant is ModelVariant.GRM:
        return build_grm_figure(dist, config)
    else:
        raise ModelMisuseError(f'No geometric construction is available for {config.variant.name}; '
                               f'only RM and GRM figures can be integrated.')


def cross_validate(dist: Distribution, config: ModelConfig = ModelConfig(),
                   tolerance: float = DEFAULT_TOLERANCE) -> ValidationRecord:
    oracle = integrate_cog(build_figure(dist, config))
    return ValidationRecord(config.variant, config.n, config.k, config.b, tuple(dist.y.tolist()),
                            model_cog(dist, config), oracle, tolerance)


def exact_key_expressions(cohort: Cohort) -> Tuple[Fraction, Fraction]:
    frequencies = cohort.exact_frequencies()
    weighted_sum = sum(i * y for i, y in enumerate(frequencies, start=1))
    sum_of_squares = sum(y * y for y in frequencies)
    return weighted_sum, sum_of_squares


def exact_overlapping_cog(cohort: Cohort, k: int = 30, b: int = 1,
                          a: Fraction = Fraction(1, 2)) -> Tuple[Fraction, Fraction]:
    """Overlapping-model COG of a cohort in rational arithmetic (k, b and a taken as exact)."""
    overlap = Fraction(k) / 100
    frequencies = cohort.exact_frequencies()
    xc = sum(y * b * ((1 - overlap) * (i - 1) + Fraction(1, 2)) for i, y in enumerate(frequencies, start=1))
    yc = a * sum(y * y for y in frequencies)
    return xc, yc


def sample_distributions(rng: np.random.Generator, samples: int, n: int) -> Iterator[Distribution]:
    """Flat Dirichlet draws, with some grades knocked out so that sparse groups are covered too."""
    for _ in range(samples):
        weights = rng.dirichlet(np.ones(n))
        if rng.random() < 0.25:
            weights = weights * (rng.random(n) < 0.5)
            if not weights.any():
                weights[rng.integers(n)] = 1.0
        yield normalize_membership(weights)


def run_validation_sweep(samples: int = 10000, seed: int = 0, ks: Sequence[float] = (10, 20, 30, 40, 49),
                         bases: Sequence[float] = (1, 10), grade_counts: Sequence[int] = (5,),
                         models: Sequence[ModelVariant] = (ModelVariant.RM, ModelVariant.GRM),
                         tolerance: float = DEFAULT_TOLERANCE, inject: Iterable[Distribution] = (),
                         progress: bool = False) -> Iterator[ValidationRecord]:
    """Closed form against figure integration over every (model, k, b), one record per check.

    Records come out distribution by distribution, in the order of `models`, `ks` and `bases`.
    """
    rng = set_random_seed(seed)
    injected = list(inject)
    for n in grade_counts:
        distributions = [dist for dist in injected if dist.n == n]
        distributions += list(sample_distributions(rng, max(samples - len(distributions), 0), n))
        if len(distributions) == 0:
            continue

        heights = np.stack([dist.y for dist in distributions])
        configs = [ModelConfig(model, n, k, b=b) for model in models for k in ks for b in bases]
        closed_forms = [model_cogs(heights, config) for config in configs]
        oracles = [integrate_cogs(heights, figure_layout(config)) for config in configs]

        for row, dist in enumerate(tqdm.tqdm(distributions, desc=f'Validating COG formulas (n={n})',
                                             file=sys.stderr, disable=not progress)):
            values = tuple(dist.y.tolist())
            for config, closed_form, oracle in zip(configs, closed_forms, oracles):
                yield ValidationRecord(config.variant, n, config.k, config.b, values,
                                       CogPoint(*closed_form[row].tolist()), CogPoint(*oracle[row].tolist()),
                                       tolerance)


def summarize_sweep(records: Iterable[ValidationRecord], sink: Optional[TextIO] = None) -> SweepSummary:
    total = failures = 0
    max_delta_x = max_delta_y = 0.0
    for record in records:
        total += 1
        failures += not record.passed
        max_delta_x = max(max_delta_x, record.delta_x)
        max_delta_y = max(max_delta_y, record.delta_y)
        if sink is not None:
            sink.write(record.to_json_line() + '\n')

    summary = SweepSummary(total, failures, max_delta_x, max_delta_y)
    logger.info(f'Validated {total} closed-form COGs: {failures} failures, max deltas '
                f'{max_delta_x:.3g} / {max_delta_y:.3g}')
    return summary
