import json
from importlib import resources

import pytest

from semifano import TruncationBox, analyze, curve_lattice
from semifano.cli import parse_input


def load_fixture(name):
    path = resources.files("semifano").joinpath("fixtures", f"{name}.json")
    return json.loads(path.read_text())


def fixture_fan(name):
    fan, basis, _meta = parse_input(load_fixture(name))
    return fan, basis


def fixture_lattice(name):
    fan, basis = fixture_fan(name)
    return fan, curve_lattice(fan, basis)


def fixture_analysis(name, caps):
    fan, lattice = fixture_lattice(name)
    return analyze(fan, lattice, TruncationBox(caps))


@pytest.fixture(scope="session")
def f2_analysis():
    return fixture_analysis("f2", (5, 5))


@pytest.fixture(scope="session")
def threefold_lattice():
    return fixture_lattice("threefold-example")
