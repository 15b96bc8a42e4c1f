# ====================================================================================================
# P05b_plant_calibration.py
# ----------------------------------------------------------------------------------------------------
# Calibrates the surrogate compressor so the nominal operating point is an exact steady state
# and the linearized suction-pressure settling time matches the manual-tuning sampling time.
#
# Purpose:
#   - Solve valve gains, torque coefficient, compressor-map coefficients and shaft inertia
#     from a CalibrationTargets model.
#   - Produce a plain-text residual report alongside the parameters.
#
# Usage:
#   from processes.P05b_plant_calibration import calibrate, calibration_report, default_targets
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
from processes.P03_shared_functions import bar_to_pa
from processes.P04_static_lists import OPERATING_POINT_BAR, EXTERNAL_PRESSURES_BAR, NOMINAL_DELTA, SETTLING_GOAL
from processes.P05a_plant_dynamics import (
    IN_VALVE_FACTOR, OUT_VALVE_FACTOR, derivatives, external_flows, linearize, settling_time_at,
)
from processes.P06_class_items import (
    CalibrationTargets, CompressorParams, PlantState, CalibrationError, OfoToolError,
)

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-8               # max |rate| relative to state scale
FLOW_MATCH_TOLERANCE = 1e-9             # relative m_in / m_out mismatch with pinned valve gains


# ====================================================================================================
# 3. DEFAULT TARGETS
# ----------------------------------------------------------------------------------------------------
def default_targets() -> CalibrationTargets:
    """Nominal rig operating point (SI) with the 47.5 s settling goal."""
    op = OPERATING_POINT_BAR
    return CalibrationTargets(
        ps=bar_to_pa(op["ps"]),
        pd=bar_to_pa(op["pd"]),
        m=op["m"],
        omega=op["omega"],
        tau=op["tau"],
        pin=bar_to_pa(EXTERNAL_PRESSURES_BAR["pin"]),
        pout=bar_to_pa(EXTERNAL_PRESSURES_BAR["pout"]),
        settling_goal=SETTLING_GOAL,
        delta_nominal=NOMINAL_DELTA,
    )


def target_state(targets: CalibrationTargets) -> PlantState:
    return PlantState(targets.ps, targets.pd, targets.m, targets.omega)


# ====================================================================================================
# 4. CALIBRATION STEPS
# ----------------------------------------------------------------------------------------------------
def _valve_gains(targets: CalibrationTargets) -> Tuple[float, float]:
    """Valve gains that pass exactly the target mass flow (or check pinned gains do)."""
    in_drop = math.sqrt(abs(targets.pin - targets.ps))
    out_drop = math.sqrt(abs(targets.pd - targets.pout))
    if in_drop == 0 or out_drop == 0:
        raise CalibrationError(
            "Zero pressure drop across a valve: no flow can pass at the target state",
            f"|pin - ps| = {abs(targets.pin - targets.ps):.6g} Pa, |pd - pout| = {abs(targets.pd - targets.pout):.6g} Pa",
        )

    kin = targets.kin if targets.kin is not None else targets.m / (IN_VALVE_FACTOR * targets.Ain * in_drop)
    kout = targets.kout if targets.kout is not None else targets.m / (OUT_VALVE_FACTOR * targets.Aout * out_drop)

    m_in = IN_VALVE_FACTOR * kin * targets.Ain * in_drop
    m_out = OUT_VALVE_FACTOR * kout * targets.Aout * out_drop
    mismatch = max(abs(m_in - targets.m), abs(m_out - targets.m)) / targets.m
    if mismatch > FLOW_MATCH_TOLERANCE:
        raise CalibrationError(
            "Valve flows cannot balance the target mass flow (m_in != m != m_out)",
            f"m_in = {m_in:.6g} kg/s, m = {targets.m:.6g} kg/s, m_out = {m_out:.6g} kg/s",
        )
    return kin, kout


def _map_coefficients(targets: CalibrationTargets) -> Tuple[float, float, float, float, float, float]:
    """Quadratic map through the target ratio with the requested mass and speed slopes."""
    ratio = targets.pd / targets.ps
    c2 = targets.map_mass_slope
    c6 = targets.map_speed_slope / (2.0 * targets.omega)
    c1 = ratio - c2 * targets.m - c6 * targets.omega ** 2
    return (c1, c2, 0.0, 0.0, 0.0, c6)


def _build_params(targets: CalibrationTargets, kin: float, kout: float, delta: float, J: float) -> CompressorParams:
    return CompressorParams(
        a01=targets.a01, Vs=targets.Vs, Vd=targets.Vd, A1=targets.A1, Lc=targets.Lc,
        J=J, delta=delta, kin=kin, kout=kout, Ain=targets.Ain, Aout=targets.Aout,
        pin=targets.pin, pout=targets.pout, map_coeffs=_map_coefficients(targets),
    )


def _solve_inertia(targets: CalibrationTargets, kin: float, kout: float, delta: float) -> float:
    """Shaft inertia J whose linearized settling time equals the goal (brentq over the bracket)."""
    state = target_state(targets)

    def gap(J: float) -> float:
        params = _build_params(targets, kin, kout, delta, J)
        return settling_time_at(state, targets.tau, params) - targets.settling_goal

    lo, hi = targets.inertia_bracket
    try:
        g_lo, g_hi = gap(lo), gap(hi)
    except OfoToolError as e:
        raise CalibrationError("Settling time undefined at the inertia bracket ends", str(e)) from e

    if g_lo * g_hi > 0:
        raise CalibrationError(
            "Settling goal is not reachable within the inertia bracket",
            f"J in [{lo:g}, {hi:g}] gives settling times "
            f"[{g_lo + targets.settling_goal:.4g}, {g_hi + targets.settling_goal:.4g}] s, "
            f"goal {targets.settling_goal:g} s",
        )
    return float(optimize.brentq(gap, lo, hi, xtol=1e-10, rtol=1e-12))


# ====================================================================================================
# 5. MAIN ENTRY
# ----------------------------------------------------------------------------------------------------
def calibrate(targets: CalibrationTargets) -> CompressorParams:
    """
    Fit the unknown plant constants to the targets.

    Steps: check the pressure ratio, solve the valve gains, refit δ to the torque balance,
    build the quadratic map, solve J for the settling goal, then verify the residuals.

    Raises:
        CalibrationError: the targets are inconsistent; the message carries the residual report.
    """
    ratio = targets.pd / targets.ps
    if not ratio > 1:
        raise CalibrationError("Target pressure ratio must exceed 1", f"pd/ps = {ratio:.6g}")
    if not targets.pin < targets.pout:
        raise CalibrationError("External suction pressure must sit below the discharge pressure",
                               f"pin = {targets.pin:g} Pa, pout = {targets.pout:g} Pa")

    kin, kout = _valve_gains(targets)

    delta = targets.tau / (targets.omega * targets.m)
    if not math.isclose(delta, targets.delta_nominal, rel_tol=1e-6):
        logger.info(
            f"Torque coefficient refit to {delta:.6g} "
            f"({100 * (delta / targets.delta_nominal - 1):+.2f}% vs nominal {targets.delta_nominal:g})"
        )

    J = _solve_inertia(targets, kin, kout, delta)
    params = _build_params(targets, kin, kout, delta, J)

    state = target_state(targets)
    rel_rates = np.abs(derivatives(state, targets.tau, params)) / state.scale()
    t_settle = settling_time_at(state, targets.tau, params)
    if np.max(rel_rates) >= RESIDUAL_TOLERANCE or abs(t_settle - targets.settling_goal) > targets.settling_tolerance:
        raise CalibrationError("Calibrated parameters fail verification", calibration_report(params, targets))

    logger.info(f"Calibrated plant: J={J:.6g}, delta={delta:.6g}, settling time {t_settle:.3f} s")
    return params


# ====================================================================================================
# 6. RESIDUAL REPORT
# ----------------------------------------------------------------------------------------------------
def calibration_report(params: CompressorParams, targets: CalibrationTargets) -> str:
    """Human-readable summary of fitted constants, steady-state residuals and dynamics."""
    state = target_state(targets)
    rates = derivatives(state, targets.tau, params)
    m_in, m_out = external_flows(state.ps, state.pd, params)

    lines = ["Compressor calibration report", "=" * 40, "", "Targets (SI):"]
    for name in ("ps", "pd", "m", "omega", "tau", "pin", "pout", "settling_goal"):
        lines.append(f"  {name:<14} {getattr(targets, name):.10g}")

    lines += ["", "Fitted parameters:"]
    for name, value in params.model_dump().items():
        if name == "map_coeffs":
            for i, c in enumerate(value, start=1):
                lines.append(f"  c{i:<13} {c:.10g}")
        else:
            lines.append(f"  {name:<14} {value:.10g}")

    lines += ["", "Steady-state residuals (rate / state scale):"]
    for name, rate, scale in zip(("dps", "dpd", "dm", "domega"), rates, state.scale()):
        lines.append(f"  {name:<14} {rate / scale:+.3e}")
    lines.append(f"  {'m_in / m_out':<14} {m_in:.6g} / {m_out:.6g} kg/s")

    lines += ["", "Dynamics at the operating point:"]
    try:
        lin = linearize(state, targets.tau, params)
        for ev in sorted(lin.eigenvalues, key=lambda z: z.real):
            lines.append(f"  eigenvalue     {ev.real:+.6g} {ev.imag:+.6g}j")
        lines.append(f"  settling time  {settling_time_at(state, targets.tau, params):.4f} s "
                     f"(goal {targets.settling_goal:g} ± {targets.settling_tolerance:g} s)")
    except OfoToolError as e:
        lines.append(f"  unavailable: {e}")

    return "\n".join(lines) + "\n"


# ====================================================================================================
# 7. MAIN EXECUTION (STANDALONE TEST)
# ----------------------------------------------------------------------------------------------------
if __name__ == "__main__":
    targets = default_targets()
    fitted = calibrate(targets)
    print(calibration_report(fitted, targets))
    print("✅ Calibration complete.")
