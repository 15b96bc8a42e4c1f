# ====================================================================================================
# P00_set_packages.py
# ----------------------------------------------------------------------------------------------------
# Centralises all package imports for the project.
#
# Purpose:
#   - Provide a single file to manage all external and standard library imports.
#   - Simplify other modules, which can just import * from this file.
#   - List all project dependencies in one place.
#
# Usage:
#   from processes.P00_set_packages import *
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
# 2. STANDARD LIBRARY IMPORTS
# ----------------------------------------------------------------------------------------------------
# Import common Python standard libraries used across the project.
# ====================================================================================================
import os                                                                   # Environment variables, CPU count for --jobs
import math                                                                 # Scalar maths in the hot ODE right-hand side
import json                                                                 # Read/write flat JSON config and result files
import logging                                                              # Standard logging for info/warning/error tracking
import argparse                                                             # Command-line front end (main/M00)
import threading                                                            # Thread names in log records, locks for memo tables
import datetime as dt                                                       # Shortcut alias for datetime module (log file naming)
from dataclasses import dataclass, field, asdict, replace                   # Frozen runtime value records
from functools import lru_cache, wraps                                      # Cache the calibrated default plant, decorators
from concurrent.futures import ThreadPoolExecutor                           # Fan-out for sweep / validate / tuner polls
from typing import Dict, List, Tuple, Optional, Any, Callable, Sequence     # Standard type hints used across the project


# ====================================================================================================
# 3. NUMERICAL IMPORTS
# ----------------------------------------------------------------------------------------------------
# (pip install numpy scipy)
# Arrays, ODE integration, linear systems and root finding.
# ====================================================================================================
import numpy as np                                                          # Numerical arrays, fast math ops
from scipy import integrate                                                 # solve_ivp (RK45 with dense output), trapezoid
from scipy import linalg as sla                                             # Cholesky factorisation for the QP metric
from scipy import optimize                                                  # brentq / root / linprog
from scipy import signal                                                    # LTI step responses for settling time


# ====================================================================================================
# 4. OTHER THIRD-PARTY IMPORTS
# ----------------------------------------------------------------------------------------------------
import pandas as pd                                                         # (pip install pandas) Tabular artifacts (CSV)
from pydantic import (                                                      # (pip install pydantic) Validated config models
    BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator,
)

# ====================================================================================================
# 5. LOGGING CONFIGURATION
# ----------------------------------------------------------------------------------------------------
# Provides a consistent logging setup for all modules in the project.
# Each time the boilerplate is imported, it ensures the logs directory exists
# and that logging writes both to file and console with a standard format.
# ====================================================================================================

# Define log directory (relative to project root)
LOG_DIR = Path(__file__).resolve().parent.parent / "logs"
LOG_DIR.mkdir(parents=True, exist_ok=True)

# Define log file name (timestamped daily)
LOG_FILE = LOG_DIR / f"{dt.datetime.now():%Y-%m-%d}.log"

# Define a common log format
LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(threadName)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Configure root logger
logging.basicConfig(
    level=logging.INFO,                     # Default level (can override per module)
    format=LOG_FORMAT,
    datefmt=DATE_FORMAT,
    handlers=[
        logging.FileHandler(LOG_FILE, encoding="utf-8"),
        logging.StreamHandler(sys.stdout),
    ],
)
