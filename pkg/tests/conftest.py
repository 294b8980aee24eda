import pytest

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    label = m.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _results[item.nodeid] = (label, "PASS" if rep.passed else "FAIL", item.function.__doc__ or "")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label, verdict, doc in sorted(_results.values(), key=lambda r: (int(r[0].rstrip("'")), r[0])):
        first = doc.strip().splitlines()[0] if doc.strip() else ""
        tr.write_line(f"criterion {label:<3} {verdict}  {first}")
