import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    number = marker.args[0]
    note = getattr(item, "acceptance_note", "")
    _RESULTS[number] = ("PASS" if report.passed else "FAIL", note)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        verdict, note = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {note}".rstrip())
