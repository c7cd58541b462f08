import sys

import numpy as np
import pytest

from mlti import from_tucker

from oracles import A1, A2, B1, B2, C1, C2


@pytest.fixture
def rng():
    return np.random.default_rng(20190417)


@pytest.fixture
def siso():
    """The 3x2 single-input single-output example system in factored form."""
    return from_tucker([A1, A2], [B1, B2], [C1, C2])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
