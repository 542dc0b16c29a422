import pathlib

import pytest

REPO = pathlib.Path(__file__).resolve().parent.parent
FIXTURE_DIR = REPO / "fixtures"
NEGATIVE_DIR = FIXTURE_DIR / "negative"


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR


@pytest.fixture
def negative_dir():
    return NEGATIVE_DIR
