import pytest

from ehdring.config import load_config


@pytest.fixture(scope="session")
def ref_cfg():
    return load_config()


@pytest.fixture
def robot(ref_cfg):
    return ref_cfg.robot


@pytest.fixture
def pump(ref_cfg):
    return ref_cfg.pump


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
