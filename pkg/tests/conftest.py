import pathlib

import pytest

from tiltcheck.quiverparse import load_algebra
from tiltcheck.repcat import enumerate_indecomposables
from tiltcheck.torsionpairs import parse_torsion_pair
from tiltcheck.twotermcx import parse_complexes

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "src" / "tiltcheck" / "fixtures"


def fixture_path(name):
    return FIXTURES / name


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def nak6():
    return load_algebra(FIXTURES / "nakayama6.quiver")


@pytest.fixture(scope="session")
def nak6_inds(nak6):
    return enumerate_indecomposables(nak6)


@pytest.fixture(scope="session")
def nak6_complexes(nak6):
    return parse_complexes((FIXTURES / "nakayama6.complexes").read_text(), nak6)


@pytest.fixture(scope="session")
def nak6_pair(nak6_inds):
    return parse_torsion_pair((FIXTURES / "nakayama6.pair").read_text(), nak6_inds)


@pytest.fixture(scope="session")
def a2():
    return load_algebra(FIXTURES / "a2.quiver")


@pytest.fixture(scope="session")
def a2_inds(a2):
    return enumerate_indecomposables(a2)


@pytest.fixture(scope="session")
def a3():
    return load_algebra(FIXTURES / "a3.quiver")


@pytest.fixture(scope="session")
def a3_inds(a3):
    return enumerate_indecomposables(a3)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
