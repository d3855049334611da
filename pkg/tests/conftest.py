import numpy as np
import pytest

from bandstop_workbench.synthesis import FilterSpec, VaractorState, synthesize

REFERENCE_F0 = 0.83e9
REFERENCE_DELTA = 0.18

# practical_fig2_v1 near its calibrated optimum for (0.83 GHz, 18 %)
CALIBRATED_STATE = VaractorState(1.2975e-12, 3.9978e-13)


@pytest.fixture(scope = 'session')
def reference_spec():
    return FilterSpec(f0 = REFERENCE_F0, delta = REFERENCE_DELTA, order = 2, z0 = 50.0, cc = 2.2e-12)

@pytest.fixture(scope = 'session')
def reference_design(reference_spec):
    return synthesize(reference_spec)

@pytest.fixture(scope = 'session')
def calibrated_state():
    return CALIBRATED_STATE

@pytest.fixture
def wide_grid():
    return np.linspace(0.3e9, 1.5e9, 1201)

@pytest.fixture
def equivalence_grid():
    return np.linspace(0.1e9, 2e9, 1001)
