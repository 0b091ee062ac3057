import pytest

# criterion id -> list of (check, passed, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def record(criterion, check, passed, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((check, bool(passed), detail))
    print(f"AC{criterion} {check}: {'PASS' if passed else 'FAIL'} {detail}")


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[criterion]
        ok = all(p for _, p, _ in checks)
        failing = [name for name, p, _ in checks if not p]
        note = "" if ok else "  (failing: " + ", ".join(failing) + ")"
        terminalreporter.write_line(f"AC{criterion:<2} {'PASS' if ok else 'FAIL'}{note}")
