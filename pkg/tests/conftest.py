import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, text = mark.args
    prev = _CRITERIA.get(number, ("PASS", text, 0.0))
    status = prev[0]
    if rep.failed:
        status = "FAIL"
    elif rep.skipped and status == "PASS" and rep.when == "setup":
        status = "SKIP"
    _CRITERIA[number] = (status, text, prev[2] + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, text, secs = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} [{status}] {text} ({secs:.2f}s)")
