# ====================================================================================================
# P11_metrics.py
# ----------------------------------------------------------------------------------------------------
# Performance functionals over closed-loop traces.
#
# Purpose:
#   - ise: γ1 · ∫ (ps − ysp)² dt by the trapezoidal rule (residual in Pa).
#   - oscillations: residual sign changes with a hysteresis deadband.
#   - β baselines for the tuning thresholds.
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
from processes.P04_static_lists import ZERO_RESIDUAL_RTOL
from processes.P06_class_items import MetricConfig, Trace


# ====================================================================================================
# 3. RESIDUAL FUNCTIONALS
# ----------------------------------------------------------------------------------------------------
def integrated_squared_error(t: np.ndarray, residual: np.ndarray, gamma1: float) -> float:
    return float(gamma1 * integrate.trapezoid(np.square(residual), t))


def count_sign_changes(residual: np.ndarray, deadband: float) -> int:
    """
    Hysteresis crossing count.

    Each sample sets the sign state to +1 above +deadband and −1 below −deadband and leaves it
    unchanged in between; every flip between +1 and −1 counts once. Samples inside the band
    before the first excursion (including an exact zero at t = 0) never count.

    A residual that lands on zero at the last sample after an excursion counts as one more
    crossing. Zero means below ZERO_RESIDUAL_RTOL of the peak, so rescaling never drops it.
    """
    r = np.asarray(residual, dtype=float)
    if r.size == 0:
        return 0
    state = np.where(r > deadband, 1, np.where(r < -deadband, -1, 0))
    signed = state[state != 0]
    count = int(np.count_nonzero(np.diff(signed)))
    peak = float(np.max(np.abs(r)))
    if signed.size and abs(r[-1]) <= ZERO_RESIDUAL_RTOL * peak:
        count += 1
    return count


# ====================================================================================================
# 4. TRACE METRICS
# ----------------------------------------------------------------------------------------------------
def ise(trace: Trace, cfg: MetricConfig) -> float:
    """ε = γ1 ∫ (ps − ysp)² dt over the trace grid."""
    return integrated_squared_error(trace.t, trace.residual, cfg.gamma1)


def oscillations(trace: Trace, cfg: MetricConfig) -> int:
    """|F|: number of residual sign changes with the configured deadband [Pa]."""
    return count_sign_changes(trace.residual, cfg.deadband)


# ====================================================================================================
# 5. THRESHOLD BASELINES
# ----------------------------------------------------------------------------------------------------
def beta1_baseline(ps0: float, setpoint: Callable[[Any], Any], cfg: MetricConfig) -> float:
    """Error of a frozen plant that stays at ps0 for the whole horizon."""
    n = int(math.floor(cfg.t_final / cfg.dt_out + 1e-9)) + 1
    t = np.arange(n) * cfg.dt_out
    return integrated_squared_error(t, ps0 - np.asarray(setpoint(t), dtype=float), cfg.gamma1)


def beta2_baseline(t_final: float) -> float:
    """Oscillation threshold of one crossing per two seconds of horizon."""
    return t_final / 2.0


def metrics_summary(trace: Trace, ps0: float, setpoint: Callable[[Any], Any], cfg: MetricConfig) -> Dict[str, Any]:
    """Flat record written to metrics.json."""
    return {
        "epsilon": ise(trace, cfg),
        "oscillations": oscillations(trace, cfg),
        "beta1_baseline": beta1_baseline(ps0, setpoint, cfg),
    }
