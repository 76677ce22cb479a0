from pathlib import Path

import numpy as np
import pytest

from hetdiag import load_csv
from hetdiag.datasets import nswcps_dataset

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def toy8():
    data, _ = load_csv(DATA / "toy8.csv", "y", "d", ["x"])
    return data


@pytest.fixture(scope="session")
def nsw4():
    return nswcps_dataset(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20200518)


def rel_close(a, b, tol):
    """|a - b| <= tol * max(1, |a|, |b|)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
