from __future__ import annotations

import pytest

from tautangle.bundles import build_layered
from tautangle.fixtures import figure_eight, rl_insert1


@pytest.fixture(scope="session")
def fig8():
    return figure_eight()


@pytest.fixture(scope="session")
def rl1():
    return rl_insert1()


@pytest.fixture(scope="session")
def rl():
    return build_layered("RL").triangulation


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
