_criteria: list[str] = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _criteria.extend(line for line in report.capstdout.splitlines() if line.startswith("CRITERION"))


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criteria, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
