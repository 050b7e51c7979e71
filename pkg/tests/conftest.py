import pytest

from apps.algebra.ring import build_ci
from apps.homology.complexes import ModulePresentation, clear_memo
from apps.support.oracle import clear_hypersurfaces


@pytest.fixture(scope="session")
def flagship():
    """F2[x,y]/(x^2, y^2)"""
    return build_ci(2, ["x", "y"], ["x^2", "y^2"])


@pytest.fixture(scope="session")
def r3():
    """F2[x,y,z]/(x^2, y^2), dim 1"""
    return build_ci(2, ["x", "y", "z"], ["x^2", "y^2"])


@pytest.fixture(scope="session")
def k(flagship):
    return ModulePresentation.residue_field(flagship)


@pytest.fixture(scope="session")
def free(flagship):
    return ModulePresentation.free(flagship)


@pytest.fixture(scope="session")
def r_mod_x(flagship):
    return ModulePresentation.cyclic(flagship, ["x"])


@pytest.fixture(scope="session")
def chi(flagship):
    ring = flagship.chi_ring
    return ring.parse


@pytest.fixture
def fresh_memo():
    clear_memo()
    clear_hypersurfaces()
    yield
    clear_memo()
    clear_hypersurfaces()
