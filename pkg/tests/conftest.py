import pytest

from popgame import instances

_acceptance = {}


@pytest.fixture
def fig1():
    return instances.gen_fig1()


@pytest.fixture
def fig5():
    return instances.gen_fig5()


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance, key=lambda n: int(n.split("_")[2])):
        mark = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
