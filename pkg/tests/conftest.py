import csv
import io

import pytest

from aspectlab.cli import main

ACCEPTANCE_LINES: list[str] = []


def parse_sections(text: str) -> dict[str, list[list[str]]]:
    """Split CSV output into its '# name' tables; header lines are skipped."""
    sections: dict[str, list[list[str]]] = {}
    current = None
    for line in text.splitlines():
        if line.startswith("#"):
            name = line[1:].strip()
            if ":" in name:
                continue
            current = sections.setdefault(name, [])
        elif current is not None and line:
            current.extend(csv.reader(io.StringIO(line)))
    return sections


def summary(text: str) -> dict[str, str]:
    rows = parse_sections(text)["summary"]
    return {k: v for k, v in rows[1:]}


@pytest.fixture
def run_cli(capsys):
    def run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    return run


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
