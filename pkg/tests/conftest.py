import os

import pytest

from cylcurve import CurveSpec, reparametrize_arclength

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name + ".json")


def load_spec(name):
    return CurveSpec.from_json(fixture_path(name))


def load_curve(name, n_samples=4096):
    return reparametrize_arclength(load_spec(name), n_samples)


@pytest.fixture(scope="session")
def prolate():
    return load_curve("prolate")


@pytest.fixture(scope="session")
def line():
    return load_curve("line")


@pytest.fixture(scope="session")
def remark2():
    return load_curve("remark2")


@pytest.fixture(scope="session")
def remark3():
    return load_curve("remark3")


@pytest.fixture(scope="session")
def wind2():
    return load_curve("wind2")
