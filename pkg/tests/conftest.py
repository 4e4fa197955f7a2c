import pytest

CRITERIA = {
    1: "Bell scenario",
    2: "GHZ scenario",
    3: "W scenario",
    4: "partial-transpose scenario",
    5: "system/environment symmetry sweep",
    6: "CP boundary family",
    7: "isometric remixing sweep",
    8: "conversion round-trips",
    9: "intermediate map",
}

_outcomes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n = marker.args[0]
    _outcomes.setdefault(n, []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        results = _outcomes.get(n)
        if not results:
            continue
        failed = [name for name, ok in results if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n} ({CRITERIA[n]}): {status}  [{len(results) - len(failed)}/{len(results)}]"
        if failed:
            line += "  failing: " + ", ".join(failed)
        tr.write_line(line)
