import pytest

from _scope import ACCEPTANCE_LINES, PARAMS, param_id


@pytest.fixture(params=PARAMS, ids=param_id)
def param(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
