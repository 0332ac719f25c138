import numpy as np
import pytest

from sharpfv.core1d import CellField, Grid1D


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def field(values, x_min=0.0, x_max=None, **grid_kw):
    values = np.asarray(values, dtype=float)
    x_max = float(len(values)) if x_max is None else x_max
    return CellField(Grid1D(x_min, x_max, len(values), **grid_kw), values)


_VERDICTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    status = "PASS" if call.excinfo is None else "FAIL"
    _VERDICTS.append((number, f"[{status}] criterion {number:2d}: {title}"))


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_VERDICTS):
        terminalreporter.write_line(line)
