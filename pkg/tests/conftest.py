import numpy as np
import pytest

from adnil.catalog import builtin


@pytest.fixture
def heis():
    return builtin("heisenberg", 5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")
    config._criteria = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            config._criteria[item.nodeid] = [m.args[0], m.args[1], "NOT RUN"]


def pytest_runtest_logreport(report):
    cfg = getattr(pytest_runtest_logreport, "config", None)
    if cfg is None:
        return
    entry = cfg._criteria.get(report.nodeid)
    if entry is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry[2] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_sessionstart(session):
    pytest_runtest_logreport.config = session.config


def pytest_terminal_summary(terminalreporter, config):
    rows = sorted(config._criteria.values())
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n, text, status in rows:
        terminalreporter.write_line(f"criterion {n:2d}: {status:4s}  {text}")
