import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kscolor import catalog
from kscolor.geometry import build_direction_set, canonicalize


@pytest.fixture(scope="session")
def peres33():
    return catalog.builtin("peres33").directions


@pytest.fixture(scope="session")
def ck31():
    return catalog.builtin("ck31").directions


@pytest.fixture(scope="session")
def bub33():
    return catalog.builtin("bub33").directions


@pytest.fixture
def axes():
    return build_direction_set([canonicalize(v) for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]], name="axes")


@pytest.fixture
def two_frames_sharing_e3():
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, -1, 0)]
    return build_direction_set([canonicalize(v) for v in pts], name="shared-e3")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
