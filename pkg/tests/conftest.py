import numpy as np
import pytest

from ladiag import Dataset, bundled


@pytest.fixture(scope="session")
def telephone():
    return bundled("telephone")


@pytest.fixture(scope="session")
def hawkins():
    return bundled("hawkins")


@pytest.fixture(scope="session")
def scottish():
    return bundled("scottish")


def random_dataset(rng, n, p):
    return Dataset(rng.normal(size=(n, p)), rng.normal(size=n))


@pytest.fixture
def masking_pair():
    # two identical outliers at x=5 on an 8-point line
    x = np.r_[np.arange(1, 9.0), 5, 5]
    y = 2 * x + 1 + np.r_[0.3, -0.2, 0.1, -0.4, 0.25, -0.15, 0.35, -0.05, 20, 20]
    return Dataset(x, y)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
