import json
import logging
from pathlib import Path
from typing import List, Dict, Union, Any

import pandas as pd

from assessment.distributions import GradeScale, Cohort, classify_scores
from assessment.errors import AssessmentInputError, AssessmentIOError, MalformedInputError, InvalidScaleError

logger = logging.getLogger(__name__)

COUNTS_HEADER = ('grade', 'count')
SCORES_HEADER = ('student_id', 'score')
NAMED_SCALES = {
    'default': GradeScale.default,
    'strict': GradeScale.strict,
}


def read_scale(scale: Union[Path, str, None] = None) -> GradeScale:
    """Resolves a scale given by name ("default", "strict") or by path to a JSON file."""
    if scale is None:
        return GradeScale.default()
    if str(scale) in NAMED_SCALES:
        return NAMED_SCALES[str(scale)]()

    records = _load_json(Path(scale))
    if isinstance(records, dict) and 'grades' in records:
        records = records['grades']
    if not isinstance(records, list):
        raise InvalidScaleError(f'Scale file {scale} must hold an array of {{label, lo, hi}} records.')

    return GradeScale.from_records(records)


class CohortReader:
    @classmethod
    def read(cls, path: Union[Path, str], scale: GradeScale = GradeScale.default(), mode: str = 'auto',
             name: str = None) -> Cohort:
        path = Path(path)
        name = name or path.stem

        if mode == 'auto' and path.suffix.lower() == '.json':
            cohort = cls.__read_report(path, name)
        else:
            frame = cls.__load_csv(path)
            if mode == 'auto':
                mode = 'scores' if set(SCORES_HEADER) <= set(frame.columns) else 'counts'

            if mode == 'counts':
                cohort = cls.__read_counts(frame, path, scale, name)
            elif mode == 'scores':
                cohort = cls.__read_scores(frame, path, scale, name)
            else:
                raise ValueError(f'Unrecognized input mode: "{mode}".')

        logger.info(f'Read cohort "{cohort.name}" from {path}: {cohort.total} students')
        return cohort

    @staticmethod
    def __load_csv(path: Path) -> pd.DataFrame:
        try:
            frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
        except pd.errors.EmptyDataError:
            raise MalformedInputError(f'{path} is empty.')
        except (pd.errors.ParserError, UnicodeDecodeError) as error:
            raise MalformedInputError(f'{path} is not a valid CSV file: {error}')
        except OSError as error:
            raise AssessmentIOError(f'Cannot read {path}: {error}')

        frame.columns = [str(column).strip().lower() for column in frame.columns]
        return frame

    @staticmethod
    def __check_header(frame: pd.DataFrame, path: Path, header: tuple) -> None:
        missing = [column for column in header if column not in frame.columns]
        if len(missing) > 0:
            raise MalformedInputError(f'{path} must have the header "{",".join(header)}", got '
                                      f'"{",".join(frame.columns)}".')

    @classmethod
    def __read_counts(cls, frame: pd.DataFrame, path: Path, scale: GradeScale, name: str) -> Cohort:
        cls.__check_header(frame, path, COUNTS_HEADER)

        grade_counts: Dict[str, int] = {}
        for line, (grade, count) in enumerate(zip(frame['grade'], frame['count']), start=2):
            grade = grade.strip()
            try:
                count = int(count.strip())
            except ValueError:
                raise MalformedInputError(f'{path}, line {line}: count "{count}" is not an integer.')
            if not grade or count < 0:
                raise MalformedInputError(f'{path}, line {line}: expected a grade and a nonnegative count.')

            scale.index_of(grade)  # Unknown labels fail here, naming the label
            grade_counts[grade] = grade_counts.get(grade, 0) + count  # Repeated grades are summed

        return Cohort.from_grade_counts(name, grade_counts, scale)

    @classmethod
    def __read_scores(cls, frame: pd.DataFrame, path: Path, scale: GradeScale, name: str) -> Cohort:
        cls.__check_header(frame, path, SCORES_HEADER)

        scores: List[float] = []
        for line, score in enumerate(frame['score'], start=2):
            try:
                scores.append(float(score))
            except ValueError:
                raise MalformedInputError(f'{path}, line {line}: score "{score}" is not a number.')

        return classify_scores(scores, scale, name)

    @staticmethod
    def __read_report(path: Path, name: str) -> Cohort:
        report = _load_json(path)
        try:
            scale = GradeScale.from_records(report['scale'])
            counts = {str(label): int(count) for label, count in report['counts'].items()}
            return Cohort.from_grade_counts(report.get('cohort', name), counts, scale)
        except AssessmentInputError:
            raise
        except (KeyError, TypeError, AttributeError, ValueError) as error:
            raise MalformedInputError(f'{path} is not an assessment report: {error!r}')


def _load_json(path: Path) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as file:
            return json.load(file)
    except json.JSONDecodeError as error:
        raise MalformedInputError(f'{path} is not valid JSON: {error}')
    except OSError as error:
        raise AssessmentIOError(f'Cannot read {path}: {error}')
