import itertools

import pytest

from polarfg.polar import new_code


def all_codes(m):
    n = 1 << m
    for bits in itertools.product((0, 1), repeat=n):
        yield new_code(m, [i for i, b in enumerate(bits) if b])


@pytest.fixture
def rm43():
    return new_code(2, [0])


@pytest.fixture
def rep4():
    return new_code(2, [0, 1, 2])


# Acceptance verdicts, one line per criterion, echoed at the end of the run.
ACCEPTANCE: dict[str, str] = {}


def record(key: str, ok: bool, detail: str) -> bool:
    line = f"criterion {key}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE[key] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")

    def order(key):
        num, _, sub = key.partition(".")
        return int(num), sub

    for key in sorted(ACCEPTANCE, key=order):
        terminalreporter.write_line(ACCEPTANCE[key])
