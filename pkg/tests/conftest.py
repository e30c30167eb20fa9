import random

import pytest
from hypothesis import settings

from feynhopf import load_theory
from feynhopf.enumerate import corpus
from feynhopf.textio import load_graphs
from importlib.resources import files

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = files("feynhopf.data")


@pytest.fixture(scope="session")
def phi3():
    return load_theory("phi3")


@pytest.fixture(scope="session")
def qed():
    return load_theory("qed")


@pytest.fixture(scope="session")
def phi4():
    return load_theory("phi4")


@pytest.fixture(scope="session")
def phi3_graphs():
    return load_graphs(str(DATA / "phi3.graphs"))


@pytest.fixture(scope="session")
def qed_graphs():
    return load_graphs(str(DATA / "qed.graphs"))


@pytest.fixture(scope="session")
def phi3_corpus():
    return corpus("phi3")


@pytest.fixture(scope="session")
def qed_corpus():
    return corpus("qed")


@pytest.fixture(scope="session")
def phi4_corpus():
    return corpus("phi4")


@pytest.fixture
def rng():
    return random.Random(20261015)
