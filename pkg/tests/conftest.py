"""Shared pytest hooks: echo the acceptance criterion results in the summary.

Stdout from passing tests is captured and discarded, so the acceptance gate
records one line per criterion here and a terminal-summary hook prints them
after the run.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
