from __future__ import annotations

# criterion number -> (description, list of sub-results); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, list[bool]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        desc, results = ACCEPTANCE[k]
        status = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"{status} criterion {k}: {desc} ({sum(results)}/{len(results)} checks)")
