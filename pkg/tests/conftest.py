import pytest

# criterion number -> (label, passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        label, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {label}: {detail}")


@pytest.fixture
def record():
    def _record(n, label, ok, detail):
        ACCEPTANCE[n] = (label, bool(ok), detail)
        assert ok, f"criterion {n} ({label}) failed: {detail}"

    return _record
