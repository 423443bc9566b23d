import math

import numpy as np
import pytest

from avelab.core import AveInstance

SQ5 = math.sqrt(5.0)

PLANAR = {
    "a": ([[1, 2], [2, 1]], [2, 2]),
    "b": ([[-1, 2], [0, 1]], [0, 0]),
    "c": ([[1, -2], [2, -3]], [-2, -2]),
    "d": ([[1, -2], [2, -3]], [2, 2]),
    "e": ([[1, -2], [0, 1]], [2, 0]),
    "f": ([[SQ5, -2], [2, -SQ5]], [0, 0]),
}


def planar(key):
    A, b = PLANAR[key]
    return AveInstance(A, b)


@pytest.fixture(params=sorted(PLANAR))
def planar_instance(request):
    return request.param, planar(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


_acceptance = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    passed = call.excinfo is None
    prev = _acceptance.get(number, (title, True))
    _acceptance[number] = (title, prev[1] and passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        title, ok = _acceptance[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}")
