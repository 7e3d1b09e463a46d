import pytest

ACCEPTANCE: list[tuple[int, str, bool, str]] = []


class Recorder:
    """Collects one pass/fail line per acceptance criterion."""

    def __init__(self, sink):
        self.sink = sink

    def __call__(self, number: int, title: str, ok: bool, detail: str = "") -> None:
        self.sink.append((number, title, bool(ok), detail))
        assert ok, f"criterion {number} ({title}) failed: {detail}"


@pytest.fixture
def record():
    return Recorder(ACCEPTANCE)


def format_line(number, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f"  ({detail})" if detail else "")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for row in sorted(ACCEPTANCE):
        terminalreporter.write_line(format_line(*row))
