import pandas as pd
import pytest

from assessment.distributions import Cohort
from assessment.errors import AssessmentIOError, InvalidConfigError
from assessment.models import ModelConfig, ModelVariant
from assessment.plots import PLOT_COLUMNS, SvgCanvas, plot_bars, plot_triangle, write_plot


def test_canvas_maps_figure_coordinates():
    canvas = SvgCanvas(200, 100, (0, 2), (0, 1), margin=0)

    assert canvas.to_pixel(0, 0) == (0, 100)
    assert canvas.to_pixel(2, 1) == (200, 0)


def test_canvas_escapes_text():
    canvas = SvgCanvas(100, 100, (0, 1), (0, 1))
    canvas.text(0.5, 0.5, 'A & B')

    svg = canvas.get_svg('<title>')

    assert 'A &amp; B' in svg and '&lt;title&gt;' in svg
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg"') and svg.rstrip().endswith('</svg>')


def test_grm_bars(shelter):
    svg, data = plot_bars(shelter, ModelConfig(ModelVariant.GRM))
    rectangles = data[data['element'] == 'rectangle']

    assert svg.count('class="grade-bar"') == 5
    assert 'multiplicity-2' in svg
    assert list(data.columns) == PLOT_COLUMNS
    assert list(rectangles['label']) == ['F', 'D', 'C', 'B', 'A']
    assert (rectangles['x_min'].iloc[0], rectangles['x_max'].iloc[0]) == (0, 1)
    assert rectangles['x_min'].iloc[-1] == pytest.approx(2.8)
    assert rectangles['x_max'].iloc[-1] == pytest.approx(3.8)


def test_rm_bars_are_juxtaposed(shelter):
    svg, data = plot_bars(shelter, ModelConfig(ModelVariant.RM))
    pieces = data[data['element'] == 'piece']

    assert 'multiplicity-2' not in svg
    assert list(pieces['x_min']) == [0, 1, 2, 3, 4]
    assert set(pieces['multiplicity']) == {1}


def test_triangle_vertices(regular):
    _, data = plot_triangle(regular, ModelConfig())
    vertices = data[data['element'] == 'vertex'].set_index('label')

    assert vertices.loc['F_w', ['x_min', 'y_min']].tolist() == pytest.approx([0.5, 0.5])
    assert vertices.loc['F_m', ['x_min', 'y_min']].tolist() == pytest.approx([1.9, 0.1])
    assert vertices.loc['F_i', ['x_min', 'y_min']].tolist() == pytest.approx([3.3, 0.5])


def test_worst_cohort_sits_on_the_worst_vertex():
    _, data = plot_triangle(Cohort('worst', (7, 0, 0, 0, 0)), ModelConfig())
    cog = data[data['element'] == 'cog'].iloc[0]
    worst = data[data['label'] == 'F_w'].iloc[0]

    assert (cog['x_min'], cog['y_min']) == pytest.approx((worst['x_min'], worst['y_min']))


@pytest.mark.parametrize('kind', ['bars-rm', 'bars-grm', 'triangle'])
def test_write_plot_emits_svg_and_csv(tmp_path, shelter, kind):
    out = tmp_path / 'figure.svg'

    csv_path = write_plot(shelter, kind, out)

    assert csv_path == tmp_path / 'figure.csv'
    assert out.read_text().startswith('<svg')
    assert list(pd.read_csv(csv_path).columns) == PLOT_COLUMNS


def test_unknown_kind(tmp_path, shelter):
    with pytest.raises(InvalidConfigError):
        write_plot(shelter, 'pie', tmp_path / 'figure.svg')


def test_unwritable_output(tmp_path, shelter):
    with pytest.raises(AssessmentIOError):
        write_plot(shelter, 'triangle', tmp_path / 'missing' / 'figure.svg')
