import pytest

from ftqml.qed422.frames import LandscapeCache

_REPORT: list = []


@pytest.fixture(scope="session")
def landscape_cache(request):
    # persisted by pytest's cache dir so repeat runs skip the exact noise folding
    return LandscapeCache(request.config.cache.mkdir("landscapes"))


@pytest.fixture(scope="session")
def report():
    """``report(tag, passed, detail)`` records one acceptance line."""

    def add(tag: str, passed: bool, detail: str) -> bool:
        line = f"{tag} {'PASS' if passed else 'FAIL'}  {detail}"
        _REPORT.append(line)
        print(line)
        return passed

    return add


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)
