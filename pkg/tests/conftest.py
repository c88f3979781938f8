import pytest

_ACCEPTANCE: dict[str, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion."""

    def record(label: str, passed: bool, detail: str):
        _ACCEPTANCE[label] = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        print(_ACCEPTANCE[label])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0].rstrip("."))):
        terminalreporter.write_line(_ACCEPTANCE[label])
