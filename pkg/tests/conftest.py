import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from synthetic import generate  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig2_csv():
    return DATA / "fig2_events.csv"


@pytest.fixture(scope="session")
def synthetic_log():
    return generate(1500, seed=11)


@pytest.fixture(scope="session")
def synthetic_xes(tmp_path_factory, synthetic_log):
    from pmflow.log import export_xes

    path = tmp_path_factory.mktemp("logs") / "synthetic.xes"
    export_xes(synthetic_log, path)
    return path


# acceptance reporting: one line per criterion after the run ----------------

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid, title = mark.args
    entry = _CRITERIA.setdefault(cid, {"title": title, "passed": 0, "failed": []})
    if report.failed:
        entry["failed"].append(item.name)
    elif report.when == "call" and report.passed:
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: (int(c.rstrip("ab")), c)):
        entry = _CRITERIA[cid]
        status = "FAIL" if entry["failed"] else "PASS"
        detail = f" (failed: {', '.join(entry['failed'])})" if entry["failed"] else ""
        terminalreporter.write_line(f"criterion {cid} [{entry['title']}]: {status}{detail}")
