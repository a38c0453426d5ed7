import argparse
import json
import logging
import sys
from functools import partial
from pathlib import Path
from typing import List, Optional, TextIO

from assessment.comparison import DEFAULT_EPS, compare, rank
from assessment.distributions import Cohort, Distribution, to_distribution
from assessment.errors import AssessmentError, AssessmentIOError, InvalidScaleError
from assessment.geometry import (
    DEFAULT_TOLERANCE, build_figure, integrate_cog, monte_carlo_cog, run_validation_sweep, summarize_sweep
)
from assessment.models import ModelConfig, ModelVariant
from assessment.plots import PLOT_KINDS, write_plot
from assessment.readers import CohortReader, read_scale
from assessment.report import METHODS, build_report, parse_methods, render_verdict, verdict_to_dict
from utils.general import dump_args_to_file, parse_list
from utils.logs import setup_logger

logger = logging.getLogger('assessment')

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 3


def add_model_args(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    parser.add_argument('--k', type=float, default=30.0, help='Overlap of neighbouring grade rectangles in percent')
    parser.add_argument('--base', type=float, default=1.0, help='Base length b of every grade rectangle')
    parser.add_argument('--scale', type=str, default='default',
                        help='Grade scale: "default", "strict" or path to a JSON scale file')
    parser.add_argument('--verbose', action='store_true', help='Log debug messages')
    parser.add_argument('--log-file', type=Path, default=None, help='Also append log messages to this file')
    parser.add_argument('--dump-args', type=Path, default=None, help='Directory to write the parsed args.json to')

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog='assessment',
                                     description='Assess and compare student groups with fuzzy COG models')
    commands = parser.add_subparsers(dest='command', required=True)

    assess = commands.add_parser('assess', help='Assess one cohort with every requested method')
    assess.add_argument('--input', type=Path, required=True, help='Counts CSV, scores CSV or JSON report')
    input_mode = assess.add_mutually_exclusive_group()
    input_mode.add_argument('--scores', dest='mode', action='store_const', const='scores',
                            help='Input holds raw student scores')
    input_mode.add_argument('--counts', dest='mode', action='store_const', const='counts',
                            help='Input holds a count per grade')
    assess.add_argument('--models', type=parse_methods, default=METHODS,
                        help=f'Comma separated methods out of {",".join(METHODS)}')
    assess.add_argument('--quality-threshold', type=int, default=None,
                        help='1-based grade index counted as a good grade in the quality of knowledge')
    assess.add_argument('--json', action='store_true', help='Print the full precision JSON report')
    assess.set_defaults(func=cmd_assess, mode='auto')

    model_choices = [variant.value for variant in ModelVariant]
    compare_parser = commands.add_parser('compare', help='Decide which of two cohorts performed better')
    compare_parser.add_argument('inputs', type=Path, nargs=2, metavar='INPUT', help='Two cohort files')
    compare_parser.add_argument('--model', choices=model_choices, default='grm', help='Model used by the criterion')
    compare_parser.add_argument('--eps', type=float, default=DEFAULT_EPS, help='Tolerance for equal key expressions')
    compare_parser.add_argument('--json', action='store_true', help='Print the verdict as JSON')
    compare_parser.set_defaults(func=cmd_compare)

    rank_parser = commands.add_parser('rank', help='Order any number of cohorts best first')
    rank_parser.add_argument('inputs', type=Path, nargs='+', metavar='INPUT', help='Cohort files')
    rank_parser.add_argument('--model', choices=model_choices, default='grm', help='Model used by the criterion')
    rank_parser.add_argument('--eps', type=float, default=DEFAULT_EPS, help='Tolerance for equal key expressions')
    rank_parser.add_argument('--json', action='store_true', help='Print the places as JSON')
    rank_parser.set_defaults(func=cmd_rank)

    validate = commands.add_parser('validate', help='Check closed-form COGs against integrated figures')
    validate.add_argument('--samples', type=int, default=10000, help='Random distributions per grade count')
    validate.add_argument('--seed', type=int, default=0, help='Random seed')
    validate.add_argument('--k', type=partial(parse_list, cast=float), default=[10, 20, 30, 40, 49],
                          help='Comma separated overlap percentages')
    validate.add_argument('--base', type=partial(parse_list, cast=float), default=[1, 10],
                          help='Comma separated base lengths')
    validate.add_argument('--grades', type=partial(parse_list, cast=int), default=[5],
                          help='Comma separated numbers of grades')
    validate.add_argument('--tolerance', type=float, default=DEFAULT_TOLERANCE, help='Allowed absolute delta')
    validate.add_argument('--records', type=str, default=None,
                          help='File to write one JSON line per check to ("-" for stdout)')
    validate.add_argument('--inject-uniform', action='store_true',
                          help='Include the uniform distribution among the checked ones')
    validate.add_argument('--monte-carlo', type=int, default=0, metavar='N',
                          help='Also estimate the uniform COG by sampling N points (demonstration only)')
    validate.add_argument('--no-progress', action='store_true', help='Hide the progress bar')
    validate.add_argument('--verbose', action='store_true', help='Log debug messages')
    validate.add_argument('--log-file', type=Path, default=None, help='Also append log messages to this file')
    validate.add_argument('--dump-args', type=Path, default=None, help='Directory to write the parsed args.json to')
    validate.set_defaults(func=cmd_validate)

    plot = commands.add_parser('plot', help='Draw a cohort as an SVG figure, with its plot data as CSV')
    plot.add_argument('--input', type=Path, required=True, help='Cohort file')
    plot.add_argument('--kind', choices=PLOT_KINDS, required=True, help='Figure to draw')
    plot.add_argument('--out', type=Path, required=True, help='SVG output path')
    plot.add_argument('--model', choices=[variant.value for variant in ModelVariant if variant.is_overlapping],
                      default='grm', help='Overlapping model drawn by the triangle')
    plot.set_defaults(func=cmd_plot)

    for command in (assess, compare_parser, rank_parser, plot):
        add_model_args(command)

    return parser.parse_args(argv)


def _read_cohorts(args: argparse.Namespace, paths: List[Path]) -> List[Cohort]:
    scale = read_scale(args.scale)
    cohorts = [CohortReader.read(path, scale, mode=getattr(args, 'mode', 'auto')) for path in paths]
    for cohort in cohorts[1:]:
        if cohort.scale != cohorts[0].scale:
            raise InvalidScaleError(f'Cohorts "{cohorts[0].name}" and "{cohort.name}" use different grade scales.')

    return cohorts


def _model_config(args: argparse.Namespace, n: int) -> ModelConfig:
    return ModelConfig(ModelVariant.from_name(args.model), n=n, k=args.k, b=args.base)


def cmd_assess(args: argparse.Namespace, out: TextIO) -> int:
    cohort, = _read_cohorts(args, [args.input])
    report = build_report(cohort, args.models, k=args.k, b=args.base, quality_threshold=args.quality_threshold)
    out.write((report.to_json() if args.json else report.render_table()) + '\n')
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, out: TextIO) -> int:
    first, second = _read_cohorts(args, args.inputs)
    config = _model_config(args, first.scale.n)
    verdict = compare(to_distribution(first), to_distribution(second), config, args.eps)

    names = (first.name, second.name)
    if args.json:
        out.write(json.dumps(verdict_to_dict(verdict, names, config), indent=2) + '\n')
    else:
        out.write(render_verdict(verdict, names, config) + '\n')
    return EXIT_OK


def cmd_rank(args: argparse.Namespace, out: TextIO) -> int:
    cohorts = _read_cohorts(args, args.inputs)
    config = _model_config(args, cohorts[0].scale.n)
    places = rank({cohort.name: to_distribution(cohort) for cohort in cohorts}, config, args.eps)

    if args.json:
        out.write(json.dumps({'model': config.variant.value, 'places': places}, indent=2) + '\n')
    else:
        for place, names in enumerate(places, start=1):
            out.write(f'{place}. {", ".join(names)}\n')
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, out: TextIO) -> int:
    if args.samples < 1:
        raise argparse.ArgumentTypeError(f'--samples must be at least 1, got {args.samples}.')

    inject = [Distribution.uniform(n) for n in args.grades] if args.inject_uniform else []
    records = run_validation_sweep(args.samples, args.seed, ks=args.k, bases=args.base, grade_counts=args.grades,
                                   tolerance=args.tolerance, inject=inject, progress=not args.no_progress)

    if args.records is None:
        summary = summarize_sweep(records)
    elif args.records == '-':
        summary = summarize_sweep(records, out)
    else:
        try:
            with open(args.records, 'w', encoding='utf-8') as sink:
                summary = summarize_sweep(records, sink)
        except OSError as error:
            raise AssessmentIOError(f'Cannot write validation records to {args.records}: {error}')

    out.write(f'checked: {summary.total}, passed: {summary.total - summary.failures}, failed: {summary.failures}, '
              f'max delta x: {summary.max_delta_x:.3g}, max delta y: {summary.max_delta_y:.3g}\n')

    if args.monte_carlo > 0:
        for n in args.grades:
            for variant in (ModelVariant.RM, ModelVariant.GRM):
                config = ModelConfig(variant, n, args.k[0], b=args.base[0])
                region = build_figure(Distribution.uniform(n), config)
                exact, estimate = integrate_cog(region), monte_carlo_cog(region, args.monte_carlo, args.seed)
                out.write(f'monte carlo {variant.name} (n={n}, k={config.k:g}, b={config.b:g}): '
                          f'({estimate.xc:.4f}, {estimate.yc:.4f}) vs exact ({exact.xc:.4f}, {exact.yc:.4f})\n')

    return EXIT_OK if summary.passed else EXIT_VALIDATION_FAILED


def cmd_plot(args: argparse.Namespace, out: TextIO) -> int:
    cohort, = _read_cohorts(args, [args.input])
    config = _model_config(args, cohort.scale.n)
    csv_path = write_plot(cohort, args.kind, args.out, config)
    out.write(f'{args.out}\n{csv_path}\n')
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    setup_logger('assessment', verbose=args.verbose, log_file=args.log_file)

    try:
        if args.dump_args is not None:
            dump_args_to_file(args, args.dump_args)
        return args.func(args, sys.stdout)
    except AssessmentError as error:
        logger.error(str(error))
        return getattr(error, 'exit_code', 2)
    except argparse.ArgumentTypeError as error:
        logger.error(str(error))
        return 2
    except OSError as error:
        logger.error(f'I/O error: {error}')
        return AssessmentIOError.exit_code


if __name__ == '__main__':
    sys.exit(main())
