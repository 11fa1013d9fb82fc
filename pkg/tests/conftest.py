from collections import defaultdict


def pytest_terminal_summary(terminalreporter):
    """Print one PASS/FAIL line per acceptance criterion."""
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        return
    outcome = defaultdict(list)
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if "test_acceptance.py" not in rep.nodeid or rep.when not in ("call", "setup"):
                continue
            if rep.when == "setup" and rep.passed:
                continue
            name = rep.nodeid.split("::")[-1].split("[")[0]
            outcome[name].append(rep.passed)
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in CRITERIA.items():
        if name not in outcome:
            terminalreporter.write_line(f"SKIP  criterion {label}")
            continue
        status = "PASS" if all(outcome[name]) else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {label}")
