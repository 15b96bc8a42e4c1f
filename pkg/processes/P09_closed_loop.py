# ====================================================================================================
# P09_closed_loop.py
# ----------------------------------------------------------------------------------------------------
# Sampled-data closed loop: the controller runs at t = kΔT on the measured suction pressure, its
# output is held (zero-order hold) until the next execution, and the plant is integrated with
# adaptive RK45 restarted at every controller event.
#
# Purpose:
#   - Setpoint trajectories (constant, truncated sine, step, CSV file).
#   - run_closed_loop producing a uniform-grid Trace.
#   - Standard initial conditions for tuning and validation runs.
#
# Usage:
#   from processes.P09_closed_loop import run_closed_loop, make_setpoint, tuning_sim_spec
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
from processes.P03_shared_functions import bar_to_pa, write_csv
from processes.P04_static_lists import (
    OPERATING_POINT_BAR, VALIDATION_POINT_BAR, SETPOINT_CONSTANT_BAR, SETPOINT_SINE,
    SETPOINT_STEP_SEGMENTS, SETPOINT_STEP_TAIL_BAR, SETPOINT_IDS, T_FINAL, DT_OUT, TRACE_COLUMNS,
)
from processes.P05a_plant_dynamics import make_rhs, sensitivity, operating_point
from processes.P06_class_items import (
    CompressorParams, ControllerState, OfoConfig, PlantState, SimSpec, Trace,
    ConfigError, OfoToolError, SimulationFault,
)
from processes.P08a_ofo_controller import controller_step, saturate

logger = logging.getLogger(__name__)

Setpoint = Callable[[Any], Any]         # t [s] (scalar or array) -> ysp [Pa]


# ====================================================================================================
# 3. SETPOINT TRAJECTORIES
# ----------------------------------------------------------------------------------------------------
def _scalar_or_array(t, values):
    return float(values) if np.ndim(t) == 0 else values


def setpoint_constant(value_bar: float = SETPOINT_CONSTANT_BAR) -> Setpoint:
    """Constant suction-pressure setpoint (0.925 bar by default)."""
    value = bar_to_pa(value_bar)

    def ysp(t):
        return _scalar_or_array(t, np.full(np.shape(t), value))

    return ysp


def setpoint_sine() -> Setpoint:
    """Truncated sinusoid max{0.94, 0.95 + 0.05 sin(0.04 t)} bar."""
    s = SETPOINT_SINE

    def ysp(t):
        bar = np.maximum(s["floor"], s["offset"] + s["amplitude"] * np.sin(s["rate"] * np.asarray(t, dtype=float)))
        return _scalar_or_array(t, bar_to_pa(bar))

    return ysp


def setpoint_step() -> Setpoint:
    """0.93 bar on [75, 125], 0.98 bar on [0, 75) ∪ (125, 150], 0.95 bar after 150 s."""

    def ysp(t):
        t_arr = np.asarray(t, dtype=float)
        conditions, values = [], []
        for start, end, value_bar, closed_start, closed_end in SETPOINT_STEP_SEGMENTS:
            after = t_arr >= start if closed_start else t_arr > start
            before = t_arr <= end if closed_end else t_arr < end
            conditions.append(after & before)
            values.append(value_bar)
        bar = np.select(conditions, values, default=SETPOINT_STEP_TAIL_BAR)
        return _scalar_or_array(t, bar_to_pa(bar))

    return ysp


def setpoint_from_file(path: str | Path) -> Setpoint:
    """
    Piecewise-linear setpoint from a CSV with columns 't' and 'ysp_bar' (or 'ysp' in Pa).

    Values are held constant outside the file's time range.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Setpoint file not found: {path}")
    try:
        df = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ConfigError(f"Setpoint file {path} is not a readable CSV: {e}") from e

    if "t" not in df.columns or not ({"ysp_bar", "ysp"} & set(df.columns)):
        raise ConfigError(f"Setpoint file {path} needs columns 't' and 'ysp_bar' (or 'ysp')")
    if {"ysp_bar", "ysp"} <= set(df.columns):
        raise ConfigError(f"Setpoint file {path} gives both 'ysp' and 'ysp_bar'")

    times = df["t"].to_numpy(dtype=float)
    values = bar_to_pa(df["ysp_bar"].to_numpy(dtype=float)) if "ysp_bar" in df else df["ysp"].to_numpy(dtype=float)
    if times.size == 0 or not np.all(np.isfinite(times)) or not np.all(np.isfinite(values)):
        raise ConfigError(f"Setpoint file {path} must contain finite rows")
    if np.any(np.diff(times) <= 0):
        raise ConfigError(f"Setpoint file {path}: 't' must be strictly increasing")

    def ysp(t):
        return _scalar_or_array(t, np.interp(np.asarray(t, dtype=float), times, values))

    return ysp


def make_setpoint(selector: str, path: Optional[str | Path] = None) -> Setpoint:
    """Resolve a setpoint selector ('constant' | 'sine' | 'step' | 'file')."""
    if selector == "constant":
        return setpoint_constant()
    if selector == "sine":
        return setpoint_sine()
    if selector == "step":
        return setpoint_step()
    if selector == "file":
        if path is None:
            raise ConfigError("Setpoint 'file' requires a setpoint file path")
        return setpoint_from_file(path)
    raise ConfigError(f"Unknown setpoint '{selector}', expected one of {SETPOINT_IDS}")


# ====================================================================================================
# 4. INITIAL CONDITIONS
# ----------------------------------------------------------------------------------------------------
def tuning_sim_spec(t_final: float = T_FINAL, dt_out: float = DT_OUT, **tolerances) -> SimSpec:
    """Start at the nominal steady state with its steady-state torque."""
    return SimSpec(
        initial_state=operating_point(), initial_torque=OPERATING_POINT_BAR["tau"],
        t_final=t_final, dt_out=dt_out, **tolerances,
    )


def validation_sim_spec(params: CompressorParams, t_final: float = T_FINAL, dt_out: float = DT_OUT,
                        **tolerances) -> SimSpec:
    """Start at the validation state; the initial torque balances the shaft (τ = δωm)."""
    v = VALIDATION_POINT_BAR
    state = PlantState(bar_to_pa(v["ps"]), bar_to_pa(v["pd"]), v["m"], v["omega"])
    return SimSpec(
        initial_state=state, initial_torque=params.delta * state.omega * state.m,
        t_final=t_final, dt_out=dt_out, **tolerances,
    )


# ====================================================================================================
# 5. CLOSED-LOOP SIMULATION
# ----------------------------------------------------------------------------------------------------
def output_grid(t_final: float, dt_out: float, dt_ctrl: float) -> np.ndarray:
    """Uniform trace grid; refined to ΔT when the controller samples faster than dt_out."""
    dt_eff = min(dt_out, dt_ctrl)
    n = int(math.floor(t_final / dt_eff + 1e-9)) + 1
    return np.arange(n) * dt_eff


def run_closed_loop(spec: SimSpec, cfg: OfoConfig, setpoint: Setpoint, params: CompressorParams) -> Trace:
    """
    Simulate the plant under the sampled OFO controller.

    Controller events happen at t = kΔT for kΔT < t_final; the event at k = 0 uses the initial
    measurement. The input computed at event k is held on [kΔT, (k+1)ΔT).

    Raises:
        ConfigError: fewer than one full sampling interval fits in the horizon.
        SimulationFault: non-physical state, integrator failure or controller failure at time t.
    """
    dT = cfg.dt
    if math.floor(spec.t_final / dT) < 1:
        raise ConfigError(f"Sampling time {dT} s exceeds the horizon {spec.t_final} s")

    rhs = make_rhs(params)
    atol = spec.atol * spec.initial_state.scale()
    n_events = int(math.ceil(spec.t_final / dT - 1e-12))

    t_grid = output_grid(spec.t_final, spec.dt_out, dT)
    segment_of = np.minimum(np.floor(t_grid / dT + 1e-9).astype(int), n_events - 1)
    states = np.empty((4, t_grid.size))
    u_applied = np.empty(t_grid.size)

    x = spec.initial_state.as_array()
    ctrl = ControllerState(u=saturate(spec.initial_torque, cfg), k=0)

    for k in range(n_events):
        t_start = k * dT
        t_end = min((k + 1) * dT, spec.t_final)

        # --- Controller event on the measurement at t_start ---
        ps_meas, pd_meas, m_meas = float(x[0]), float(x[1]), float(x[2])
        try:
            ctrl = controller_step(
                ctrl, ps_meas, float(setpoint(t_start)),
                lambda tau: sensitivity(tau, m_meas, pd_meas, params), cfg,
            )
        except OfoToolError as e:
            raise SimulationFault(t_start, f"controller failed: {e}") from e
        u = float(ctrl.u)

        # --- Plant under zero-order hold ---
        sol = integrate.solve_ivp(
            rhs, (t_start, t_end), x, method="RK45", args=(u,),
            rtol=spec.rtol, atol=atol, dense_output=True,
        )
        if not sol.success:
            raise SimulationFault(t_start, f"integrator failed: {sol.message}")

        physical = np.isfinite(sol.y).all(axis=0) & (sol.y[[0, 1, 3]] > 0).all(axis=0)
        if not physical.all():
            t_bad = float(sol.t[np.argmin(physical)])
            raise SimulationFault(t_bad, f"non-physical state {sol.y[:, np.argmin(physical)]}")

        mask = segment_of == k
        if mask.any():
            states[:, mask] = sol.sol(t_grid[mask])
            u_applied[mask] = u
        x = sol.y[:, -1]

    if not np.all(np.isfinite(states)) or np.any(states[[0, 1, 3]] <= 0):
        raise SimulationFault(float(t_grid[-1]), "non-physical state on the output grid")

    return Trace(
        t=t_grid, ps=states[0], pd=states[1], m=states[2], omega=states[3],
        u_applied=u_applied, ysp=np.asarray(setpoint(t_grid), dtype=float), n_events=n_events,
    )


# ====================================================================================================
# 6. TRACE OUTPUT
# ----------------------------------------------------------------------------------------------------
def save_trace(trace: Trace, path: str | Path) -> Path:
    """Write the trace CSV (header t,ps,pd,m,omega,u_applied,ysp; SI units)."""
    return write_csv(trace.to_frame()[list(TRACE_COLUMNS)], path)
