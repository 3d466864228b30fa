from pathlib import Path

import pytest

from tpnclass.model import load_net

NETS = Path(__file__).parent / "nets"


@pytest.fixture
def fig2a():
    return load_net(NETS / "fig2a.net")


@pytest.fixture
def fig2b():
    return load_net(NETS / "fig2b.net")


@pytest.fixture
def ndead():
    return load_net(NETS / "ndead.net")


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
