import random

import pytest

from sparsekit.linalg import BitMatrix


def random_matrix(rng, n, density=None):
    p = rng.random() if density is None else density
    rows = tuple(sum(1 << j for j in range(n) if rng.random() < p) for _ in range(n))
    return BitMatrix(n, rows)


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES = []


def report_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
