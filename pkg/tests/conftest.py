import sys
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = {}


class _Recorder:
    @contextmanager
    def criterion(self, number, title):
        detail = {"text": ""}
        try:
            yield detail
        except BaseException:
            _ACCEPTANCE[number] = ("FAIL", title, detail["text"])
            raise
        _ACCEPTANCE[number] = ("PASS", title, detail["text"])


@pytest.fixture
def acceptance():
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, text = _ACCEPTANCE[number]
        line = f"[{status}] {number}. {title}"
        if text:
            line += f" -- {text}"
        terminalreporter.write_line(line)
