import sys


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, detail = results[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {detail}")
    passed = sum(ok for ok, _ in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
