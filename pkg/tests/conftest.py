import pytest

from invkl import build_system
from invkl.canonical import CanonicalBasis
from invkl.invmodule import InvolutionModule
from invkl.klclassic import KLTable


@pytest.fixture(scope="session")
def a2():
    return build_system("A2")


@pytest.fixture(scope="session")
def a3():
    return build_system("A3")


@pytest.fixture(scope="session")
def b2():
    return build_system("B2")


@pytest.fixture(scope="session")
def a2_module(a2):
    return InvolutionModule(a2)


@pytest.fixture(scope="session")
def a2_canonical(a2_module):
    return CanonicalBasis(a2_module).build()


@pytest.fixture(scope="session")
def a2_kl(a2):
    return KLTable(a2)
