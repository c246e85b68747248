import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ltikit import StateSpaceModel

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def rotation(omega=1.0):
    return StateSpaceModel.continuous([[0, omega], [-omega, 0]], [[0], [1]], [[1, 1]])


def double_integrator():
    return StateSpaceModel.discrete([[1, 1], [0, 1]], [[0], [1]], [[1, 1]])


def digital_position():
    return StateSpaceModel.discrete([[1, 0.08015], [0, 0.6313]], [[0.00339], [0.06308]], [[1, 0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance reporting ------------------------------------------------------

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and rep.when == "call":
        _ACCEPTANCE.append((marker.args[0], marker.args[1], rep.outcome))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, outcome in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{num:>2} {title}")
