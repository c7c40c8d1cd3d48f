import pytest

from fhsplit.model import get_preset

# (criterion number, description, passed, detail) appended by test_acceptance
ACCEPTANCE_RESULTS = []


@pytest.fixture
def sc1_s_embb():
    return get_preset("SC1-S-eMBB")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, desc, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {desc}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
