import pytest

from breit_spectra import MassMode, PhysicalSystem, build_context, equal_mass_level

FINE_STRUCTURE = 1 / 137.036


def eigen_context(alpha: float, n: int = 1, mass: float = 1.0):
    system = PhysicalSystem(mass, mass, alpha)
    return build_context(system, equal_mass_level(system, n).q, MassMode.EQUAL)


@pytest.fixture
def ground_ctx():
    return eigen_context(0.1, 1)
