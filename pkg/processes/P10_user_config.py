# ====================================================================================================
# P10_user_config.py
# ----------------------------------------------------------------------------------------------------
# PURPOSE:
#   Local, user-editable defaults for the command-line workflows.
#
# INSTRUCTIONS:
#   1. Fill in the parameter-set slots below with tuned (ν, ΔT) pairs you want to validate.
#   2. Leave any unused slot as None.
#   3. CLI flags and --config files always override the values here.
#
#   (The validate workflow runs every slot that is filled in, in slot order.)
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
# 2. USER CONFIGURATION
# ----------------------------------------------------------------------------------------------------
# Worker threads for sweep / validate / tuner polling (0 = one per CPU).
# ====================================================================================================
DEFAULT_JOBS = 0

# --- Controller used by `simulate` when neither --nu/--dt nor a config file is given ---
DEFAULT_NU = 150.0
DEFAULT_DT = 47.5

# --- Parameter sets for `validate`: (name, ν, ΔT) ---
PARAMETER_SET_SLOT_1 = ("Set1", 468.1, 5.78)
PARAMETER_SET_SLOT_2 = ("Set2", 207.1, 12.88)
PARAMETER_SET_SLOT_3 = ("Set3", 199.1, 80.0)
PARAMETER_SET_SLOT_4 = ("Manual", 150.0, 47.5)
PARAMETER_SET_SLOT_5 = None


def parameter_sets() -> list:
    """Filled-in parameter-set slots, in slot order."""
    slots = (
        PARAMETER_SET_SLOT_1, PARAMETER_SET_SLOT_2, PARAMETER_SET_SLOT_3,
        PARAMETER_SET_SLOT_4, PARAMETER_SET_SLOT_5,
    )
    return [slot for slot in slots if slot]
