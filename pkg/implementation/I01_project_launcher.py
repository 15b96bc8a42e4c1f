# ====================================================================================================
# I01_project_launcher.py
# ----------------------------------------------------------------------------------------------------
# Purpose:
#   Acts as the project-level bridge between the CLI entry (M00 / M01) and the
#   project-specific workflows (implementation/I02_workflows.py).
#
# How it fits:
#   - Called by M01_load_project_config.launch_project_main()
#   - Maps the subcommand name onto its cmd_* workflow and returns its exit code.
# ----------------------------------------------------------------------------------------------------
# Author:       Gerry Pidgeon
# Created:      2025-11-07
# Project:      OFO Compressor Tuner
# ====================================================================================================


# ====================================================================================================
# 1. SYSTEM IMPORTS
# ----------------------------------------------------------------------------------------------------
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
sys.dont_write_bytecode = True  # Prevents __pycache__ creation


# ====================================================================================================
# 2. PROJECT IMPORTS
# ----------------------------------------------------------------------------------------------------
from processes.P00_set_packages import *
from processes.P06_class_items import ConfigError
from implementation.I02_workflows import (
    cmd_simulate, cmd_sweep, cmd_tune, cmd_validate, cmd_calibrate,
)

logger = logging.getLogger(__name__)

WORKFLOWS = {
    "simulate":  cmd_simulate,
    "sweep":     cmd_sweep,
    "tune":      cmd_tune,
    "validate":  cmd_validate,
    "calibrate": cmd_calibrate,
}


# ====================================================================================================
# 3. MAIN LAUNCH FUNCTION
# ----------------------------------------------------------------------------------------------------
def launch_workflow(run_config) -> int:
    """
    Run the workflow named by run_config.command.

    Returns:
        int: exit code of the workflow (0 success, 1 configuration error, 2 simulation fault).
    """
    workflow = WORKFLOWS.get(run_config.command)
    if workflow is None:
        raise ConfigError(f"Unknown command '{run_config.command}', expected one of {sorted(WORKFLOWS)}")

    logger.info(f"Starting '{run_config.command}' (out={run_config.out_dir}, jobs={run_config.jobs})")
    code = workflow(run_config)
    logger.info(f"Finished '{run_config.command}' with exit code {code}")
    return code


# ====================================================================================================
# END OF FILE
# ====================================================================================================
