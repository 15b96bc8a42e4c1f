# ====================================================================================================
# P01_set_file_paths.py
# ----------------------------------------------------------------------------------------------------
# Centralises all key file and directory paths for the project.
#
# Purpose:
#   - Define a single source of truth for the project's root directory.
#   - Build the per-workflow output folder layout (trace, metrics, sweeps, tuning results).
#   - Allow other modules to import paths without hardcoding.
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
from processes.P06_class_items import ConfigError


# ====================================================================================================
# 3. PROJECT ROOT
# ----------------------------------------------------------------------------------------------------
# This block defines the 'PROJECT_ROOT' variable for this module and for
# any other module that needs to import it.
# ====================================================================================================
try:
    # .parent is /.../project/processes/
    # .parent.parent is /.../project/
    PROJECT_ROOT = Path(__file__).resolve().parent.parent
except NameError:
    # Fallback for interactive environments where __file__ isn't defined
    PROJECT_ROOT = Path.cwd()


# ====================================================================================================
# 4. CORE DIRECTORIES
# ----------------------------------------------------------------------------------------------------
LOGS_DIR = PROJECT_ROOT / "logs"
DEFAULT_OUTPUT_DIR = PROJECT_ROOT / "outputs"

# --- Ensure key directories exist ---
LOGS_DIR.mkdir(parents=True, exist_ok=True)


# ====================================================================================================
# 5. ARTIFACT FILE NAMES
# ----------------------------------------------------------------------------------------------------
# Every workflow writes into its own --out folder with these fixed names.
# ====================================================================================================
ARTIFACT_NAMES = {
    "trace":              "trace.csv",
    "metrics":            "metrics.json",
    "ofo_config":         "ofo_config.json",
    "sweep":              "sweep.csv",
    "tune_summary_csv":   "tune_summary.csv",
    "tune_summary_txt":   "tune_summary.txt",
    "validation_csv":     "validation_errors.csv",
    "validation_txt":     "validation_errors.txt",
    "params":             "compressor_params.json",
    "calibration_report": "calibration_report.txt",
}


def tune_result_name(beta1: float, beta2: float) -> str:
    """File name for one TuneResult of a β schedule, e.g. 'tune_beta_150_50.json'."""
    return f"tune_beta_{beta1:g}_{beta2:g}.json"


# ====================================================================================================
# 6. OUTPUT FOLDER BUILDER
# ----------------------------------------------------------------------------------------------------
def build_output_paths(out_dir: str | Path | None) -> Dict[str, Path]:
    """
    Create the output folder (if needed) and return the artifact path map.

    Parameters:
        out_dir (str | Path | None): Target folder. None falls back to DEFAULT_OUTPUT_DIR.

    Returns:
        Dict[str, Path]: Logical artifact name -> full path (plus 'root').

    Raises:
        ConfigError: The folder cannot be created or is not writable.
    """
    root = Path(out_dir) if out_dir else DEFAULT_OUTPUT_DIR
    try:
        root.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"Output directory '{root}' cannot be created: {e}") from e

    if not os.access(root, os.W_OK):
        raise ConfigError(f"Output directory '{root}' is not writable.")

    paths = {"root": root}
    for key, name in ARTIFACT_NAMES.items():
        paths[key] = root / name
    return paths


# ====================================================================================================
# 7. MAIN EXECUTION (STANDALONE TEST)
# ----------------------------------------------------------------------------------------------------
if __name__ == "__main__":
    print(f"Project Root: {PROJECT_ROOT}")
    for key, path in build_output_paths(DEFAULT_OUTPUT_DIR).items():
        print(f"{key.ljust(20)} : {path}")
