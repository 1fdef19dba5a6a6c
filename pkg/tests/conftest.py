import numpy as np
import pytest

from roid.datagen import make_rng


@pytest.fixture
def rng():
    return make_rng(12345)


def random_orthonormal(rng, n, k):
    return np.linalg.qr(rng.standard_normal((n, k)))[0]


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        _, _, num, *words = name.split("_")
        terminalreporter.write_line(f"criterion {int(num):2d} {' '.join(words):<32} {_ACCEPTANCE[name]}")
