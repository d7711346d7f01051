import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""

    def check(number: int, title: str, ok: bool, detail: str, seconds: float | None = None):
        timing = f" [{seconds:.2f}s]" if seconds is not None else ""
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title}: {detail}{timing}"
        _LINES.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
