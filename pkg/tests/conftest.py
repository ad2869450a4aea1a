"""Shared fixtures and the acceptance-summary reporter.

Acceptance tests register one line per criterion via the ``acceptance``
fixture; the terminal summary prints them all so a run ends with a compact
pass/fail table regardless of pytest verbosity.
"""
from __future__ import annotations

import numpy as np
import pytest

_ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance():
    """Record one ``ACCEPTANCE <n>: PASS/FAIL — detail`` line per criterion."""

    def record(number: int, passed: bool, detail: str) -> None:
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE_LINES[number] = f"ACCEPTANCE {number:2d}: {status} — {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
