import time

import numpy as np
import pytest

from wavecrest import field as fieldmod
from wavecrest import laminar, vorticity, wavegen


@pytest.fixture(scope="session")
def gamma_m1():
    return vorticity.poly_vorticity([-1.0], B=1.0)


@pytest.fixture(scope="session")
def extreme_wave(gamma_m1):
    return laminar.trivial_extreme(gamma_m1, 1.0)


@pytest.fixture(scope="session")
def extreme_field(extreme_wave):
    return fieldmod.laminar_to_field(extreme_wave, 1.0, 128, 128)


@pytest.fixture(scope="session")
def family(gamma_m1):
    """Continuation family at period pi with 14 amplitudes, with build time."""
    targets = list(np.linspace(0.0, 0.25, 14))
    t0 = time.perf_counter()
    fam = wavegen.continue_family(gamma_m1, 1.0, np.pi, targets)
    return fam, time.perf_counter() - t0
