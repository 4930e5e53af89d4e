from __future__ import annotations

from datetime import datetime, timedelta, timezone

import pytest

from techlev.model import LibraryInstance, parse_gav

ACCEPTANCE_LINES: list = []

T0 = datetime(2018, 4, 3, 12, 0, tzinfo=timezone.utc)


def make_instance(gav, days=0.0, own_loc=1000, dep_loc=0, deps=(), own_vulns=0, dep_vulns=0):
    return LibraryInstance(
        gav=parse_gav(gav),
        released=T0 + timedelta(days=days),
        own_loc=own_loc,
        direct_deps=tuple(parse_gav(d) for d in deps),
        dep_loc=dep_loc,
        own_vulns=own_vulns,
        dep_vulns=dep_vulns,
    )


@pytest.fixture
def acceptance_report():
    def report(number, title, passed, detail=""):
        line = f"AC{number} {'PASS' if passed else 'FAIL'} {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
