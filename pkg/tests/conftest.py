def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    order = ["1", "2", "3", "4", "5", "6a", "6b", "6c", "7", "8", "9", "10", "11"]
    for key in sorted(results, key=order.index):
        terminalreporter.write_line(results[key])
