import os

import numpy as np
import pytest


@pytest.fixture
def rng():
    """Random generator; set POSCON_SEED to reproduce a run."""
    return np.random.default_rng(int(os.environ.get("POSCON_SEED", "20240917")))


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
