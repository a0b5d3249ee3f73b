"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

from __future__ import annotations

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n, title = int(m.group(1)), m.group(2).replace("_", " ")
    detail = dict(report.user_properties).get("detail", "")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        verdict = "PASS" if report.outcome == "passed" else "FAIL"
        if verdict == "FAIL" and not detail:
            detail = str(report.longrepr).strip().splitlines()[-1] if report.longrepr else "error"
        _results[n] = (verdict, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        verdict, title, detail = _results[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {title}  [{detail}]")
