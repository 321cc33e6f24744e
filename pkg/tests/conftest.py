"""Prints one PASS/FAIL line per acceptance criterion after the run."""

import re

CRITERIA_LABELS = {
    1: "rough sequences match the trial-division oracle exactly",
    2: "group orders (1, 2, 8, 48, 480) and exhaustive closure",
    3: "quadrature matches every cataloged closed form within 1e-10",
    4: "residue vs quadrature within 1e-10, imaginary leak below 1e-12",
    5: "family chain signs, scales, exact identities, child stats",
    6: "excision holds exactly up to three child periods",
    7: "accelerated series within 1e-6 of quadrature (1e-8 base case)",
    8: "scan recovers printed values, patterns, and duplications",
    9: "recognizer round-trips every cataloged closed form",
}

_CRITERION = re.compile(r"test_criterion_(\d+)")
_outcomes: dict[int, str] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None:
        return
    n = int(m.group(1))
    if report.when == "call":
        _outcomes[n] = "PASS" if report.outcome == "passed" else "FAIL"
    elif report.outcome != "passed":
        _outcomes[n] = "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        label = CRITERIA_LABELS.get(n, "")
        terminalreporter.write_line(f"criterion {n}: {_outcomes[n]}  {label}")
