import numpy as np
import pytest

from ctqsearch import ScheduleI, ScheduleII, initial_state, integrate_fixed, integrate_mobile


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so timed tests measure physics, not jit."""
    grid = np.linspace(0.0, 0.5, 3)
    s1 = ScheduleI(50, 1.0, 1.0)
    integrate_fixed(s1, initial_state(50), grid, tol=1e-10)
    integrate_fixed(ScheduleII(100, 1.0, 4.5), initial_state(100), grid, tol=1e-10)
    integrate_mobile(s1, (0.0, 1.0), grid, tol=1e-10)
