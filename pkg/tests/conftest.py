import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def frozen():
    return json.loads((FIXTURES / "calibration.json").read_text())


ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def record():
    """Store a one-line verdict for the acceptance summary."""

    def _record(key: str, ok: bool, detail: str):
        ACCEPTANCE_LINES[key] = f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}"
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
