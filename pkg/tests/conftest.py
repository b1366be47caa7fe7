import pytest

_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def record():
    def _record(label: str, ok: bool, detail: str = "") -> bool:
        _RESULTS.append((label, ok, detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))
