import pytest

from garchquad import GarchOrder
from garchquad.reference import load_example_series, load_reference_cut


def pytest_addoption(parser):
    parser.addoption(
        "--full-bench",
        action="store_true",
        default=False,
        help="run the full 1000-replication benchmark reproduction (minutes)",
    )


@pytest.fixture(scope="session")
def paper_series():
    return load_example_series()


@pytest.fixture(scope="session")
def reference_cut():
    return load_reference_cut()


@pytest.fixture(scope="session")
def arch1():
    return GarchOrder(p=1, q=0)
