"""Prints one pass/fail line per acceptance criterion after the run."""

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" in report.nodeid and "criterion" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=_criterion_key):
        outcome = _ACCEPTANCE[name]
        label = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{label}  {name}")


def _criterion_key(name):
    tail = name.split("criterion")[-1].lstrip("_")
    digits = ""
    for c in tail:
        if c.isdigit():
            digits += c
        else:
            break
    return (int(digits) if digits else 0, name)
