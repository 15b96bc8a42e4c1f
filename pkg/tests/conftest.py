# ====================================================================================================
# conftest.py
# ----------------------------------------------------------------------------------------------------
# Shared pytest fixtures: the calibrated default plant and small synthetic plants with exact
# arithmetic for fixed-point checks.
# ----------------------------------------------------------------------------------------------------
# Author:       Gerry Pidgeon
# Created:      2025-11-07
# Project:      OFO Compressor Tuner
# ====================================================================================================
import sys
from pathlib import Path

# --- Standard block for all modules ---
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
sys.dont_write_bytecode = True

import pytest

from processes.P05b_plant_calibration import default_targets
from processes.P06_class_items import CompressorParams, PlantState
from processes.P07_module_configs import default_params


@pytest.fixture(scope="session")
def params() -> CompressorParams:
    return default_params()


@pytest.fixture(scope="session")
def targets():
    return default_targets()


@pytest.fixture
def exact_plant():
    """
    Plant whose steady state is representable exactly in binary floating point.

    ps = 1e5, pd = 2e5, m = 80, ω = 400, τ = δωm = 4000 with Π ≡ 2 and 200-unit valve radicands.
    """
    params = CompressorParams(
        a01=340.0, Vs=50.0, Vd=20.0, A1=0.05, Lc=5.0, J=2.0, delta=0.125,
        kin=1.0, kout=0.5, Ain=1.0, Aout=1.0, pin=1.4e5, pout=1.6e5,
        map_coeffs=(2.0, 0.0, 0.0, 0.0, 0.0, 0.0),
    )
    return params, PlantState(1.0e5, 2.0e5, 80.0, 400.0), 4000.0
