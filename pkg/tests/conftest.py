import pathlib

import numpy as np
import pytest

from qcontext import load_fixture
from qcontext.noncontextual import partition

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

# anchor geometries used throughout the suite
H2 = "h2_sto3g_r0.7400"
LIH = "lih_sto3g_r1.5747"
BEH = "beh_cation_sto3g_r1.3447"
HCL = "hcl_sto3g_r1.3413"

LIH_SCAN = [
    "lih_sto3g_r1.0000",
    "lih_sto3g_r1.5747",
    "lih_sto3g_r2.2000",
    "lih_sto3g_r2.8000",
    "lih_sto3g_r3.4000",
]
BEH_SCAN = [
    "beh_cation_sto3g_r1.0000",
    "beh_cation_sto3g_r1.3447",
    "beh_cation_sto3g_r1.8000",
    "beh_cation_sto3g_r2.2000",
    "beh_cation_sto3g_r2.6000",
]


def fixture_path(name: str) -> pathlib.Path:
    return FIXTURE_DIR / f"{name}.json"


@pytest.fixture(scope="session")
def fixtures():
    """All committed molecular fixtures, keyed by file stem."""
    return {p.stem: load_fixture(p) for p in sorted(FIXTURE_DIR.glob("*.json"))}


@pytest.fixture(scope="session")
def partitions(fixtures):
    """Greedy-magnitude noncontextual partitions, computed once per run."""
    return {name: partition(fx.hamiltonian) for name, fx in fixtures.items()}


@pytest.fixture(scope="session")
def h2(fixtures):
    return fixtures[H2]


@pytest.fixture(scope="session")
def lih(fixtures):
    return fixtures[LIH]


@pytest.fixture(scope="session")
def beh(fixtures):
    return fixtures[BEH]


@pytest.fixture(scope="session")
def hcl(fixtures):
    return fixtures[HCL]


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


# one line per end-to-end acceptance check, echoed after the run so the
# verdicts are visible even with output capture on
ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance summary")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
