from pathlib import Path

import pytest

from zgb import build_table, compute_constants

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def reference_path() -> Path:
    return DATA_DIR / "zeros_to_1000_ref.txt"


@pytest.fixture(scope="session")
def constants():
    return compute_constants()


@pytest.fixture(scope="session")
def table100():
    return build_table(100.0)


@pytest.fixture(scope="session")
def table1000():
    return build_table(1000.0)
