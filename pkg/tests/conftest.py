import numpy as np
import pytest

from hexstar import (
    HEISENBERG,
    XXZ_FERRO,
    build_geometry,
    build_group,
    character_table,
    full_spectrum,
)


@pytest.fixture(scope="session")
def geometry():
    return build_geometry()


@pytest.fixture(scope="session")
def group(geometry):
    return build_group(geometry)


@pytest.fixture(scope="session")
def chartable():
    return character_table()


# Diagonalizations are memoized process-wide, so these just warm the cache
# once and hand out the shared results.

@pytest.fixture(scope="session")
def heisenberg_spectra():
    return full_spectrum(HEISENBERG)


@pytest.fixture(scope="session")
def xxz_spectra():
    return full_spectrum(XXZ_FERRO)


@pytest.fixture(scope="session")
def unit_time_grid():
    return np.linspace(0.0, 1.0, 2001)
