import pytest

_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(label, ok, detail)``; also returns ``ok``."""

    def record(label, ok, detail=""):
        _RESULTS.append((label, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
