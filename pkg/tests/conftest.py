import sys
import warnings

import pytest

from maslovkit.errors import NeitherRegularWarning


@pytest.fixture(autouse=True)
def _quiet_pair_warnings():
    # the randomised pair-index checks pair two non-regular transports on purpose
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NeitherRegularWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
