import pytest

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def add(criterion: int, checks: list[tuple[str, bool]]):
        ok = all(passed for _, passed in checks)
        failed = [name for name, passed in checks if not passed]
        detail = "all sub-checks passed" if ok else "failed: " + "; ".join(failed)
        ACCEPTANCE_LINES.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
