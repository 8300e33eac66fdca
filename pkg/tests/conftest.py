import pytest

from cacforge import nt
from cacforge.errors import DomainError
from cacforge.field import make_field, prime_power


def prime_powers(limit: int, lo: int = 2) -> list[int]:
    out = []
    for q in range(lo, limit + 1):
        try:
            prime_power(q)
        except DomainError:
            continue
        out.append(q)
    return out


def proper_divisors(n: int) -> list[int]:
    return [d for d in nt.divisors(n) if d != n]


@pytest.fixture(scope="session")
def f31():
    return make_field(31)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[num])
