import numpy as np
import pytest

from ensemblekit.data import Dataset
from ensemblekit.imaging import Image

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(tag, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("acceptance")
    if marker:
        _ACCEPTANCE.append((marker, report.outcome))


@pytest.fixture(autouse=True)
def _record_acceptance(request):
    marker = request.node.get_closest_marker("acceptance")
    if marker:
        request.node.user_properties.append(("acceptance", f"{marker.args[0]} {marker.args[1]}"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")


def make_dataset(X, y, classes=None):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y)
    if classes is None:
        classes = tuple(f"c{i}" for i in range(int(y.max()) + 1))
    return Dataset(X, y, classes)


def uniform(n):
    return np.full(n, 1.0 / n)


def random_image(rng, h, w):
    return Image(rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8))
