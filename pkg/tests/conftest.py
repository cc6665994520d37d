import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (passed, detail) before asserting."""
    name = request.node.name

    def record(passed: bool, detail: str) -> bool:
        _ACCEPTANCE[name] = (bool(passed), detail)
        return passed

    yield record
    if name not in _ACCEPTANCE:
        _ACCEPTANCE[name] = (False, "no result recorded")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
