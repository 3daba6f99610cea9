import os
import sys

import hypothesis
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from spinshor import ChainParameters  # noqa: E402
from spinshor.shor import run_shor  # noqa: E402


hypothesis.settings.register_profile("default", deadline=None, max_examples=100)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def params():
    return ChainParameters()


@pytest.fixture(scope="session")
def shor_outcome(params):
    """Default protocol run with trajectories; shared because it costs seconds."""
    return run_shor(params, 0.1, record=True)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
