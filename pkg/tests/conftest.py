import numpy as np
import pytest

from qfilqu import InitialCondition, ModelParams

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion, reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        _ACCEPTANCE.append((marker.args[0], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}")


def random_draw(rng, complex_amplitudes=False):
    """(params, init, t) over the default scan ranges."""
    params = ModelParams(1.0, rng.uniform(0.01, 2.0), rng.uniform(0.0, 3.0))
    a0 = rng.uniform(0.0, 1.0)
    b0 = np.sqrt(1.0 - a0 * a0)
    if complex_amplitudes:
        a0 = a0 * np.exp(1j * rng.uniform(0, 2 * np.pi))
        b0 = b0 * np.exp(1j * rng.uniform(0, 2 * np.pi))
    init = InitialCondition(a0, b0, rng.uniform(0.0, 2 * np.pi))
    return params, init, rng.uniform(0.0, 20.0)


@pytest.fixture
def draws():
    rng = np.random.default_rng(20240611)
    return [random_draw(rng, complex_amplitudes=bool(i % 2)) for i in range(1000)]
