import pytest

from tagwalk.group import make_instance, make_params


@pytest.fixture(scope="session")
def params19():
    return make_params(19)


@pytest.fixture(scope="session")
def instance19(params19):
    return make_instance(params19, seed=11)


@pytest.fixture(scope="session")
def params3():
    return make_params(3)


# acceptance criteria report: one line per criterion in the terminal summary
ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    def _record(criterion: int, ok: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE[criterion] = line
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
