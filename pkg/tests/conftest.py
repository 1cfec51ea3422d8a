from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

import pytest

from hallbridge import linear_quiver
from hallbridge.verify import Session

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(Path(__file__).resolve().parent))


@lru_cache(maxsize=None)
def session(n: int, q: int, rad2: bool, bound: tuple[int, ...]) -> Session:
    return Session(linear_quiver(n, q, rad2), bound)


@pytest.fixture
def a2():
    return session(2, 2, False, (2, 2))


@pytest.fixture
def a2q3():
    return session(2, 3, False, (2, 2))


@pytest.fixture
def a3rad2():
    return session(3, 2, True, (1, 1, 1))


@pytest.fixture
def a4rad2():
    return session(4, 2, True, (1, 1, 1, 1))


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance") and hasattr(m, "RESULTS")),
               None)
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
