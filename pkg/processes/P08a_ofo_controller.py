# ====================================================================================================
# P08a_ofo_controller.py
# ----------------------------------------------------------------------------------------------------
# Online feedback optimization controller for suction-pressure tracking.
#
# Purpose:
#   - Tracking objective Φ = 0.01 (y − ysp)² and its gradient.
#   - Reduced steepest-descent increment −ν · sens · ∂Φ/∂y and the general QP direction.
#   - Input saturation and the sampled update u^{k+1} = sat(u^k + α·direction).
#
# Units:
#   Objective, gradient and descent_direction take pressures in the configured gradient unit
#   (bar by default). controller_step receives measurements in Pa and converts. Sensitivities
#   are always Pa/Nm.
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
from processes.P06_class_items import ControllerState, OfoConfig
from processes.P08b_active_set_qp import qp_direction

logger = logging.getLogger(__name__)

OBJECTIVE_WEIGHT = 0.01


# ====================================================================================================
# 3. OBJECTIVE
# ----------------------------------------------------------------------------------------------------
def objective(ps, psd):
    """Φ = 0.01 (ps − psd)²."""
    return OBJECTIVE_WEIGHT * (ps - psd) ** 2


def objective_gradient(ps, psd) -> Tuple[float, float]:
    """(∂Φ/∂u, ∂Φ/∂y); Φ does not depend on the input."""
    return 0.0, 2.0 * OBJECTIVE_WEIGHT * (ps - psd)


# ====================================================================================================
# 4. DIRECTIONS AND SATURATION
# ----------------------------------------------------------------------------------------------------
def _as_input(value):
    """Return a Python float for scalar inputs, a float array otherwise."""
    arr = np.asarray(value, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def descent_direction(u, y, ysp, sens, cfg: OfoConfig):
    """
    Reduced steepest-descent increment −ν Hᵀ∇Φᵀ = −ν (∂Φ/∂u + sens · ∂Φ/∂y).

    With ν = αG⁻¹ folded in, the returned value is the applied increment u⁺ − u before
    saturation. `sens` is ∂y/∂u (scalar, or one entry per input).
    """
    dphi_du, dphi_dy = objective_gradient(y, ysp)
    reduced_gradient = dphi_du + np.asarray(sens, dtype=float) * dphi_dy
    return _as_input(-np.asarray(cfg.nu, dtype=float) * reduced_gradient)


def saturate(u, cfg: OfoConfig):
    """Clip to [u_min, u_max] component-wise."""
    return _as_input(np.clip(np.asarray(u, dtype=float), cfg.u_min, cfg.u_max))


# ====================================================================================================
# 5. SAMPLED UPDATE
# ----------------------------------------------------------------------------------------------------
def controller_step(
    state: ControllerState,
    y_meas: float,
    ysp: float,
    sens_fn: Callable[[Any], Any],
    cfg: OfoConfig,
) -> ControllerState:
    """
    One controller execution.

    Parameters:
        state   : current input u^k and iteration index k.
        y_meas  : measured suction pressure [Pa].
        ysp     : setpoint [Pa].
        sens_fn : u -> ∂h/∂u [Pa/Nm] at the current measurement (scalar or n×p matrix).
        cfg     : controller configuration; the QP path is used when cfg.qp is set.

    Raises:
        QpInfeasible, QpStalled: propagated from the QP solve.
    """
    scale = cfg.pressure_scale
    y_unit, ysp_unit = y_meas / scale, ysp / scale
    u = np.asarray(state.u, dtype=float)

    if cfg.qp is None:
        step = descent_direction(u, y_unit, ysp_unit, sens_fn(state.u), cfg)
    else:
        grad = objective_gradient(y_unit, ysp_unit)
        w = qp_direction(u, y_meas, grad, sens_fn(state.u), cfg.qp)
        step = cfg.qp.alpha * w

    u_next = saturate(u + step, cfg)
    return ControllerState(u=u_next, k=state.k + 1)
