import math

import pytest

from soddy import catalog
from soddy.complexes import Complex, ComplexSpec
from soddy.equations import assemble_system, Flavor
from soddy.solver import solve

SQRT3 = math.sqrt(3.0)


@pytest.fixture(scope="session")
def flower3():
    return catalog.flower_complex(3)


@pytest.fixture(scope="session")
def tetrahedron():
    return catalog.tetrahedron_complex()


@pytest.fixture(scope="session")
def standard_torus():
    return catalog.standard_torus_complex()


@pytest.fixture(scope="session")
def fig3_torus():
    """Four-face torus containing the three-triangle strip of the normal
    curve sign fixture: faces 0,1,2 form the strip, face 3 closes up."""
    gluings = [((0, 1), (1, 0)), ((1, 1), (2, 2)), ((0, 2), (2, 0)),
               ((3, 0), (1, 2)), ((3, 1), (2, 1)), ((3, 2), (0, 0))]
    return Complex(ComplexSpec.from_gluings(4, gluings))


@pytest.fixture(scope="session")
def tetra_reduced_solved(tetrahedron):
    system = assemble_system(tetrahedron, flavor=Flavor.REDUCED, delta0=3)
    report = solve(system)
    assert report.converged
    return system, report


@pytest.fixture(scope="session")
def torus_full_solved(standard_torus):
    system = assemble_system(standard_torus)
    report = solve(system)
    assert report.converged
    return system, report
