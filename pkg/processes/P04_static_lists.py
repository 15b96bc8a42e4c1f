# ====================================================================================================
# P04_static_lists.py
# ----------------------------------------------------------------------------------------------------
# Central repository for static reference data, constants, and lookup dictionaries.
#
# Purpose:
#   - Store the compressor operating points, setpoint constants and the default beta schedule.
#   - Provide a single import location for CSV headers and selector names.
#   - Keep static data separate from logic to simplify maintenance and updates.
#
# All pressures below are in bar (as quoted for the test rig); convert with P03.bar_to_pa.
#
# Usage:
#   from processes.P04_static_lists import OPERATING_POINT_BAR
#
# ----------------------------------------------------------------------------------------------------
# Author:       Gerry Pidgeon
# Created:      2025-11-07
# Project:      OFO Compressor Tuner
# ====================================================================================================


# ====================================================================================================
# 1. SYSTEM IMPORTS
# ----------------------------------------------------------------------------------------------------
# Add parent directory to sys.path so this module can import other "processes" packages.
# ====================================================================================================
import sys
from pathlib import Path

# --- Standard block for all modules ---
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
sys.dont_write_bytecode = True  # Prevents __pycache__ folders from being created


# ====================================================================================================
# 2. PROJECT IMPORTS
# ----------------------------------------------------------------------------------------------------
# Bring in standard libraries and settings from the central import hub.
# ====================================================================================================
from processes.P00_set_packages import * # Imports all packages from P00_set_packages.py


# ====================================================================================================
# 3. OPERATING POINTS
# ----------------------------------------------------------------------------------------------------
# Initial steady state of the rig (tuning runs) and the validation initial condition.
# ====================================================================================================
OPERATING_POINT_BAR = {
    "ps":    1.015,     # bar
    "pd":    1.868,     # bar
    "m":     60.45,     # kg/s
    "omega": 647.2,     # rad/s
    "tau":   323.6,     # Nm (steady-state torque)
}

VALIDATION_POINT_BAR = {
    "ps":    0.91745,
    "pd":    2.0,
    "m":     80.0,
    "omega": 700.5,
}

EXTERNAL_PRESSURES_BAR = {"pin": 1.05, "pout": 1.55}

TORQUE_BOUNDS = {"u_min": -300.0, "u_max": 1000.0}      # Nm
NOMINAL_DELTA = 0.00729
SETTLING_GOAL = 47.5                                    # s, manual-tuning sampling time
SETTLING_BAND = 0.05


# ====================================================================================================
# 4. SETPOINT TRAJECTORIES
# ----------------------------------------------------------------------------------------------------
SETPOINT_IDS = ("constant", "sine", "step", "file")

SETPOINT_CONSTANT_BAR = 0.925

SETPOINT_SINE = {"floor": 0.94, "offset": 0.95, "amplitude": 0.05, "rate": 0.04}   # bar, bar, bar, rad/s

# Step trajectory segments: (start, end, value_bar, closed_start, closed_end)
SETPOINT_STEP_SEGMENTS = (
    (0.0,   75.0,  0.98, True,  False),
    (75.0,  125.0, 0.93, True,  True),
    (125.0, 150.0, 0.98, False, True),
)
SETPOINT_STEP_TAIL_BAR = 0.95                           # (150, t_F]

VALIDATION_TRAJECTORIES = ("step", "sine")


# ====================================================================================================
# 5. TUNING DEFAULTS
# ----------------------------------------------------------------------------------------------------
T_FINAL = 200.0
DT_OUT = 0.01
ZERO_RESIDUAL_RTOL = 1e-9                               # |r| below this share of the peak counts as zero
NU_BOUNDS = (0.0, 1e3)
DT_LOWER_BOUND = 5e-3
INITIAL_GUESS = (0.1, 50.0)                              # (ν, ΔT)
TUNE_BUDGET = 100

# β pairs applied in decreasing order (error threshold, oscillation threshold)
DEFAULT_BETA_SCHEDULE = (
    (150.0, 50.0),
    (37.5, 50.0),
    (18.75, 25.0),
    (9.0, 12.0),
    (6.0, 20.0),
)

# Default sweep axes (contour grids of the parameter study)
SWEEP_NU_VALUES = (0.001, 0.1, 1.0, 10.0, 1000.0)
SWEEP_DT_VALUES = (0.005, 0.05, 0.5, 5.0, 50.0)


# ====================================================================================================
# 6. CSV HEADERS
# ----------------------------------------------------------------------------------------------------
TRACE_COLUMNS = ("t", "ps", "pd", "m", "omega", "u_applied", "ysp")
SWEEP_COLUMNS = ("nu", "dt", "epsilon", "oscillations")
TUNE_SUMMARY_COLUMNS = ("beta1", "beta2", "nu", "dt", "epsilon", "oscillations", "feasible")
