"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

_criteria = {}
_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid not in _criteria:
        return
    if report.when == "call" or report.failed:
        prev = _outcomes.get(report.nodeid, "PASS")
        _outcomes[report.nodeid] = "FAIL" if report.failed or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, title) in sorted(_criteria.items(), key=lambda kv: kv[1][0]):
        if nodeid in _outcomes:
            terminalreporter.write_line(f"criterion {number:>2} {title}: {_outcomes[nodeid]}")
