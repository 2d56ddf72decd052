import pytest

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance_record():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
