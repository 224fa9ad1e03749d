import json
from pathlib import Path

import pytest

from obata_holonomy import holonomy, hyper, obata

GOLDEN = Path(__file__).parent / "golden"

# filled by test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def golden():
    def load(name):
        return json.loads((GOLDEN / name).read_text())
    return load


@pytest.fixture(scope="session")
def derived(golden):
    return golden("derived_values.json")


@pytest.fixture(scope="session")
def joyce():
    return hyper.build_joyce_su3()


@pytest.fixture(scope="session")
def hopf():
    return hyper.build_hopf_g0()


@pytest.fixture(scope="session")
def joyce_conn(joyce):
    return obata.obata_lambda(joyce)


@pytest.fixture(scope="session")
def hopf_conn(hopf):
    return obata.obata_lambda(hopf)


@pytest.fixture(scope="session")
def joyce_hol(joyce_conn):
    return holonomy.nomizu_closure(joyce_conn)


@pytest.fixture(scope="session")
def hopf_hol(hopf_conn):
    return holonomy.nomizu_closure(hopf_conn)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
