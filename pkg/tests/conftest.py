import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion, at the bottom of the run."""
    seen = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            hit = _CRITERION.search(nodeid)
            if not hit:
                continue
            number = int(hit.group(1))
            label = hit.group(2)
            ok = outcome == "passed" and seen.get(number, (None, True))[1]
            prior = seen.get(number)
            if prior is None:
                seen[number] = (label, outcome == "passed")
            else:
                seen[number] = (prior[0], prior[1] and outcome == "passed")
    if not seen:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(seen):
        label, ok = seen[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:02d} {label}: {verdict}"
        )
