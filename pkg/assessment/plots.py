import logging
from pathlib import Path
from typing import List, Tuple, Dict, Any
from xml.sax.saxutils import escape

import pandas as pd

from assessment.distributions import Cohort, to_distribution
from assessment.errors import AssessmentIOError, InvalidConfigError
from assessment.geometry import rectangle_bases, build_rm_figure, build_grm_figure, WeightedRegion
from assessment.models import ModelConfig, ModelVariant, model_cog, triangle_frame

logger = logging.getLogger(__name__)

PLOT_KINDS = ('bars-rm', 'bars-grm', 'triangle')
PLOT_COLUMNS = ['element', 'label', 'x_min', 'x_max', 'y_min', 'y_max', 'multiplicity']
FILLS = {1: '#9ecae1', 2: '#e6550d'}


class SvgCanvas:
    """Minimal SVG writer mapping figure coordinates (y up) onto a fixed pixel frame."""

    def __init__(self, width: int, height: int, x_range: Tuple[float, float], y_range: Tuple[float, float],
                 margin: int = 40):
        self.width = width
        self.height = height
        self.margin = margin
        self.x_range = x_range
        self.y_range = y_range
        self.__elements: List[str] = []

    def to_pixel(self, x: float, y: float) -> Tuple[float, float]:
        x_span = (self.x_range[1] - self.x_range[0]) or 1
        y_span = (self.y_range[1] - self.y_range[0]) or 1
        pixel_x = self.margin + (x - self.x_range[0]) / x_span * (self.width - 2 * self.margin)
        pixel_y = self.height - self.margin - (y - self.y_range[0]) / y_span * (self.height - 2 * self.margin)
        return pixel_x, pixel_y

    def rectangle(self, left: float, right: float, bottom: float, top: float, fill: str, css_class: str,
                  extra: str = '') -> None:
        x1, y1 = self.to_pixel(left, top)
        x2, y2 = self.to_pixel(right, bottom)
        self.__elements.append(f'<rect class="{css_class}" x="{x1:.2f}" y="{y1:.2f}" width="{x2 - x1:.2f}" '
                               f'height="{y2 - y1:.2f}" fill="{fill}" {extra}/>')

    def polygon(self, points: List[Tuple[float, float]], css_class: str, fill: str = 'none',
                stroke: str = '#333333') -> None:
        pixels = ' '.join(f'{x:.2f},{y:.2f}' for x, y in (self.to_pixel(*point) for point in points))
        self.__elements.append(f'<polygon class="{css_class}" points="{pixels}" fill="{fill}" stroke="{stroke}"/>')

    def circle(self, x: float, y: float, radius: float, css_class: str, fill: str) -> None:
        pixel_x, pixel_y = self.to_pixel(x, y)
        self.__elements.append(f'<circle class="{css_class}" cx="{pixel_x:.2f}" cy="{pixel_y:.2f}" r="{radius}" '
                               f'fill="{fill}"/>')

    def line(self, start: Tuple[float, float], end: Tuple[float, float], css_class: str = 'axis') -> None:
        (x1, y1), (x2, y2) = self.to_pixel(*start), self.to_pixel(*end)
        self.__elements.append(f'<line class="{css_class}" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                               f'stroke="#000000"/>')

    def text(self, x: float, y: float, content: str, dy: int = 0) -> None:
        pixel_x, pixel_y = self.to_pixel(x, y)
        self.__elements.append(f'<text x="{pixel_x:.2f}" y="{pixel_y + dy:.2f}" font-size="12" '
                               f'text-anchor="middle">{escape(content)}</text>')

    def axes(self) -> None:
        self.line((self.x_range[0], self.y_range[0]), (self.x_range[1], self.y_range[0]))
        self.line((self.x_range[0], self.y_range[0]), (self.x_range[0], self.y_range[1]))

    def get_svg(self, title: str) -> str:
        header = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
                  f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">')
        return '\n'.join([header, f'<title>{escape(title)}</title>'] + self.__elements + ['</svg>']) + '\n'


def _plot_row(element: str, label: str, x_min: float, x_max: float, y_min: float, y_max: float,
              multiplicity: int = 1) -> Dict[str, Any]:
    return dict(zip(PLOT_COLUMNS, (element, label, x_min, x_max, y_min, y_max, multiplicity)))


def _draw_region(canvas: SvgCanvas, region: WeightedRegion, rows: List[Dict[str, Any]]) -> None:
    for piece in region.pieces:
        if piece.height > 0:
            canvas.rectangle(piece.left, piece.right, piece.bottom, piece.top, FILLS.get(piece.multiplicity, '#a63603'),
                             css_class=f'region-piece multiplicity-{piece.multiplicity}')
        rows.append(_plot_row('piece', '', piece.left, piece.right, piece.bottom, piece.top, piece.multiplicity))


def plot_bars(cohort: Cohort, config: ModelConfig) -> Tuple[str, pd.DataFrame]:
    dist = to_distribution(cohort)
    if config.variant is ModelVariant.RM:
        region = build_rm_figure(dist, config.b)
    else:
        region = build_grm_figure(dist, config)

    bases = rectangle_bases(config)
    y_top = max(float(dist.y.max()), 0.1) * 1.1
    canvas = SvgCanvas(640, 400, (0, bases[-1][1]), (0, y_top))
    rows: List[Dict[str, Any]] = []

    _draw_region(canvas, region, rows)
    for label, (left, right), height in zip(cohort.scale.labels, bases, dist.y.tolist()):
        # Outline of the full grade bar on top of the filled pieces
        canvas.rectangle(left, right, 0, height, 'none', css_class='grade-bar', extra='stroke="#08306b"')
        canvas.text((left + right) / 2, 0, label, dy=16)
        rows.append(_plot_row('rectangle', label, left, right, 0.0, height))

    canvas.axes()
    title = f'{config.variant.name} bar representation of {cohort.name}'
    return canvas.get_svg(title), pd.DataFrame(rows, columns=PLOT_COLUMNS)


def plot_triangle(cohort: Cohort, config: ModelConfig) -> Tuple[str, pd.DataFrame]:
    frame = triangle_frame(config)
    cog = model_cog(to_distribution(cohort), config)
    vertices = [('F_w', frame.worst), ('F_m', frame.balanced), ('F_i', frame.ideal)]

    x_max = frame.ideal.xc + frame.worst.xc
    y_max = frame.worst.yc * 1.2
    canvas = SvgCanvas(640, 400, (0, x_max), (0, y_max))
    canvas.polygon([(point.xc, point.yc) for _, point in vertices], css_class='cog-triangle', fill='#deebf7')
    rows = []
    for label, point in vertices:
        canvas.circle(point.xc, point.yc, 3, css_class='vertex', fill='#333333')
        canvas.text(point.xc, point.yc, f'{label}({point.xc:.2f}, {point.yc:.2f})', dy=-8)
        rows.append(_plot_row('vertex', label, point.xc, point.xc, point.yc, point.yc))

    canvas.circle(cog.xc, cog.yc, 5, css_class='cohort-cog', fill='#e6550d')
    canvas.text(cog.xc, cog.yc, cohort.name, dy=18)
    rows.append(_plot_row('cog', cohort.name, cog.xc, cog.xc, cog.yc, cog.yc))

    canvas.axes()
    title = f'{config.variant.name} triangle of admissible centers of gravity with {cohort.name}'
    return canvas.get_svg(title), pd.DataFrame(rows, columns=PLOT_COLUMNS)


def write_plot(cohort: Cohort, kind: str, out_path: Path, config: ModelConfig = ModelConfig()) -> Path:
    """Writes the SVG figure and its plot data as CSV next to it; returns the CSV path."""
    if kind == 'bars-rm':
        svg, data = plot_bars(cohort, config.with_variant(ModelVariant.RM))
    elif kind == 'bars-grm':
        svg, data = plot_bars(cohort, config.with_variant(ModelVariant.GRM))
    elif kind == 'triangle':
        svg, data = plot_triangle(cohort, config)
    else:
        raise InvalidConfigError(f'Unknown plot kind "{kind}". Available: {", ".join(PLOT_KINDS)}.')

    out_path = Path(out_path)
    csv_path = out_path.with_suffix('.csv')
    try:
        out_path.write_text(svg, encoding='utf-8')
        data.to_csv(csv_path, index=False)
    except OSError as error:
        raise AssessmentIOError(f'Cannot write plot to {out_path}: {error}')

    logger.info(f'Wrote {kind} plot of "{cohort.name}" to {out_path} (data: {csv_path})')
    return csv_path
