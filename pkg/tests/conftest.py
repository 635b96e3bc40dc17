import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.notes: list[str] = []

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        detail = self.title + (f" ({'; '.join(self.notes)})" if self.notes else "")
        if exc_type is not None:
            detail += f" -- {exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        _ACCEPTANCE[self.number] = (exc_type is None, detail)
        return False


@pytest.fixture
def criterion():
    """``with criterion(n, title) as c:`` records a PASS/FAIL line for criterion n."""
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
