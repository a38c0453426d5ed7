from pathlib import Path

import pytest

from assessment.distributions import Cohort, to_distribution
from assessment.readers import CohortReader

DATA_PATH = Path(__file__).resolve().parent.parent / 'data'
COHORTS_PATH = DATA_PATH / 'cohorts'


@pytest.fixture
def cohorts_path() -> Path:
    return COHORTS_PATH


@pytest.fixture
def shelter() -> Cohort:
    return CohortReader.read(COHORTS_PATH / 'shelter.csv')


@pytest.fixture
def regular() -> Cohort:
    return CohortReader.read(COHORTS_PATH / 'regular.csv')


@pytest.fixture
def class_1() -> Cohort:
    return CohortReader.read(COHORTS_PATH / 'class_1.csv')


@pytest.fixture
def class_2() -> Cohort:
    return CohortReader.read(COHORTS_PATH / 'class_2.csv')


@pytest.fixture
def shelter_dist(shelter):
    return to_distribution(shelter)


@pytest.fixture
def regular_dist(regular):
    return to_distribution(regular)


@pytest.fixture
def write_csv(tmp_path):
    def write(name: str, content: str) -> Path:
        path = tmp_path / name
        path.write_text(content, encoding='utf-8')
        return path

    return write
