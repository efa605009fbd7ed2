from pathlib import Path

import pytest

from ermakov_stefan.similarity import make_solution
from ermakov_stefan.stefan import forward_solve

REPO = Path(__file__).resolve().parents[1]
_CRITERIA: list[str] = []


@pytest.fixture(scope="session")
def repo_root() -> Path:
    return REPO


@pytest.fixture(scope="session")
def sol():
    return make_solution(1.0, 1.0, 0.25, 1.0)


@pytest.fixture(scope="session")
def problem(sol):
    return forward_solve(sol, 1.0)


@pytest.fixture
def record_criterion():
    def record(label: str, ok: bool, detail: str) -> None:
        _CRITERIA.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
