import json
from pathlib import Path

import pytest

ALPHAS = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75)
BETAS = (-1.0, -0.5, 0.0, 0.5, 1.0)


@pytest.fixture(scope="session")
def derived():
    return json.loads(Path(__file__).with_name("derived_values.json").read_text())


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion and return the flag."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
