"""Shared test hooks: collects acceptance-criterion verdicts and prints
one line per criterion in the terminal summary."""

ACCEPTANCE_RESULTS: list[str] = []


def record(number: int, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    ACCEPTANCE_RESULTS.append(f"[{verdict}] criterion {number}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for line in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(line)
