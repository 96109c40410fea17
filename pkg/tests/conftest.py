import pytest

# criterion number -> [title, passed, detail]; filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        tr.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")


class Criterion:
    def __init__(self, n, title):
        self.n = n
        ACCEPTANCE[n] = [title, False, "did not finish"]

    def result(self, ok, detail=""):
        entry = ACCEPTANCE[self.n]
        entry[1:] = [bool(ok), detail]
        print(f"criterion {self.n} {'PASS' if ok else 'FAIL'}: {entry[0]}: {detail}")
        assert ok, detail


@pytest.fixture
def criterion():
    return Criterion
