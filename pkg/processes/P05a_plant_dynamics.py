# ====================================================================================================
# P05a_plant_dynamics.py
# ----------------------------------------------------------------------------------------------------
# Centrifugal compressor plant: ODE right-hand side, boundary valves, compressor map, the
# steady-state output map h(τ, m) and its input sensitivity, linearization and settling time.
#
# Purpose:
#   - Provide pure functions over (state, torque, params); no module-level mutable state.
#   - Everything is SI: Pa, kg/s, rad/s, Nm, s.
#
# Usage:
#   from processes.P05a_plant_dynamics import derivatives, sensitivity, settling_time
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
from processes.P04_static_lists import OPERATING_POINT_BAR, SETTLING_BAND
from processes.P06_class_items import (
    CompressorParams, PlantState, Linearization, Trace,
    NumericalFault, MapDomainError, InstabilityError, SimulationFault,
)

logger = logging.getLogger(__name__)

IN_VALVE_FACTOR = 0.4
OUT_VALVE_FACTOR = 0.8
FD_RELATIVE_STEP = 1e-6
STEADY_STATE_TOLERANCE = 1e-6           # max |rate| relative to state scale


# ====================================================================================================
# 3. ALGEBRAIC PIECES
# ----------------------------------------------------------------------------------------------------
def compressor_map(m: float, omega: float, params: CompressorParams) -> float:
    """Pressure ratio Π = c1 + c2 m + c3 ω + c4 m² + c5 m ω + c6 ω²."""
    c1, c2, c3, c4, c5, c6 = params.map_coeffs
    return c1 + c2 * m + c3 * omega + c4 * m * m + c5 * m * omega + c6 * omega * omega


def _map_speed_slope(m: float, omega: float, params: CompressorParams) -> float:
    """∂Π/∂ω."""
    _, _, c3, _, c5, c6 = params.map_coeffs
    return c3 + c5 * m + 2.0 * c6 * omega


def external_flows(ps: float, pd: float, params: CompressorParams) -> Tuple[float, float]:
    """
    Valve mass flows on the suction and discharge side.

    Returns:
        (m_in, m_out) in kg/s, both ≥ 0 (the radicand is taken in absolute value).
    """
    m_in = IN_VALVE_FACTOR * params.kin * params.Ain * math.sqrt(abs(params.pin - ps))
    m_out = OUT_VALVE_FACTOR * params.kout * params.Aout * math.sqrt(abs(pd - params.pout))
    return m_in, m_out


def operating_point() -> PlantState:
    """Nominal steady state of the rig in SI units."""
    op = OPERATING_POINT_BAR
    return PlantState(bar_to_pa(op["ps"]), bar_to_pa(op["pd"]), op["m"], op["omega"])


# ====================================================================================================
# 4. STATE DERIVATIVES
# ----------------------------------------------------------------------------------------------------
def make_rhs(params: CompressorParams) -> Callable[[float, np.ndarray, float], np.ndarray]:
    """
    Build the ODE right-hand side f(t, x, τ) with all constants bound as local floats.

    This is the hot path of every simulation; `derivatives` evaluates the same expressions
    term by term so both produce bit-identical rates.
    """
    gain_s = params.a01 ** 2 / params.Vs
    gain_d = params.a01 ** 2 / params.Vd
    gain_m = params.A1 / params.Lc
    J, delta = params.J, params.delta
    k_in = IN_VALVE_FACTOR * params.kin * params.Ain
    k_out = OUT_VALVE_FACTOR * params.kout * params.Aout
    pin, pout = params.pin, params.pout
    c1, c2, c3, c4, c5, c6 = params.map_coeffs

    def rhs(t: float, x: np.ndarray, tau: float) -> np.ndarray:
        ps, pd, m, w = x
        m_in = k_in * math.sqrt(abs(pin - ps))
        m_out = k_out * math.sqrt(abs(pd - pout))
        pi_ratio = c1 + c2 * m + c3 * w + c4 * m * m + c5 * m * w + c6 * w * w
        return np.array([
            gain_s * (m_in - m),
            gain_d * (m - m_out),
            gain_m * (pi_ratio * ps - pd),
            (tau - delta * w * m) / J,
        ])

    return rhs


def derivatives(state: PlantState, tau: float, params: CompressorParams) -> np.ndarray:
    """
    State rates (ṗs, ṗd, ṁ, ω̇) of the compressor at torque τ.

    Raises:
        NumericalFault: a rate (or intermediate term) is not finite; `term` names it.
    """
    rates = make_rhs(params)(0.0, state.as_array(), float(tau))
    for name, value in zip(("dps", "dpd", "dm", "domega"), rates):
        if not math.isfinite(value):
            raise NumericalFault(name, f"state={state}, tau={tau}")
    return rates


# ====================================================================================================
# 5. STEADY-STATE MAP AND SENSITIVITY
# ----------------------------------------------------------------------------------------------------
# At steady state ω = τ/(δm), so ps = pd / Π(m, τ/(δm)) = h(τ, m).
# ====================================================================================================
def _speed_at(tau: float, m: float, params: CompressorParams) -> float:
    if not m > 0:
        raise MapDomainError(f"Mass flow must be positive to invert the torque balance, got m={m}")
    return tau / (params.delta * m)


def steady_state_map(tau: float, m: float, pd: float, params: CompressorParams) -> float:
    """Suction pressure h(τ, m) = pd / Π(m, τ/(δm)) [Pa]."""
    omega = _speed_at(tau, m, params)
    pi_ratio = compressor_map(m, omega, params)
    if not pi_ratio > 0:
        raise MapDomainError(f"Compressor map is non-positive (Π={pi_ratio:.6g}) at m={m}, ω={omega}")
    return pd / pi_ratio


def sensitivity(tau: float, m: float, pd: float, params: CompressorParams) -> float:
    """
    Input-output sensitivity ∂h/∂τ [Pa/Nm] by the chain rule through ω = τ/(δm).

    ∂h/∂τ = −pd · (∂Π/∂ω) / (Π² · δ m)
    """
    omega = _speed_at(tau, m, params)
    pi_ratio = compressor_map(m, omega, params)
    if not pi_ratio > 0:
        raise MapDomainError(f"Compressor map is non-positive (Π={pi_ratio:.6g}) at m={m}, ω={omega}")
    return -pd * _map_speed_slope(m, omega, params) / (pi_ratio * pi_ratio * params.delta * m)


# ====================================================================================================
# 6. STEADY STATE SOLVE
# ----------------------------------------------------------------------------------------------------
def find_steady_state(params: CompressorParams, tau: float, guess: Optional[PlantState] = None) -> PlantState:
    """
    Solve f(x, τ) = 0 for the four states.

    The algebraic form (valve balance, map balance, torque balance) is solved in variables
    scaled by the guess, which defaults to the nominal operating point.

    Raises:
        NumericalFault: the root finder does not converge to a physical steady state.
    """
    guess = guess or operating_point()
    scale = guess.scale()

    def residual(z: np.ndarray) -> np.ndarray:
        ps, pd, m, w = z * scale
        m_in, m_out = external_flows(ps, pd, params)
        return np.array([
            (m_in - m) / scale[2],
            (m - m_out) / scale[2],
            (compressor_map(m, w, params) * ps - pd) / scale[1],
            (tau - params.delta * w * m) / max(abs(tau), 1.0),
        ])

    sol = optimize.root(residual, np.ones(4), method="hybr", options={"xtol": 1e-13})
    state = PlantState.from_array(sol.x * scale)
    if not sol.success or not state.is_physical():
        raise NumericalFault("steady state", f"root solve failed at tau={tau}: {sol.message}")

    rates = derivatives(state, tau, params)
    if np.max(np.abs(rates) / state.scale()) > STEADY_STATE_TOLERANCE:
        raise NumericalFault("steady state", f"residual rates {rates} too large at tau={tau}")
    return state


# ====================================================================================================
# 7. LINEARIZATION AND SETTLING TIME
# ----------------------------------------------------------------------------------------------------
def linearize(state: PlantState, tau: float, params: CompressorParams) -> Linearization:
    """Central finite-difference Jacobians with relative step 1e-6 of each variable's scale."""
    rhs = make_rhs(params)
    x0 = state.as_array()
    scale = state.scale()

    if np.max(np.abs(rhs(0.0, x0, tau)) / scale) > STEADY_STATE_TOLERANCE:
        logger.warning(f"Linearizing away from steady state at {state}, tau={tau}")

    A_jac = np.empty((4, 4))
    for j in range(4):
        h = FD_RELATIVE_STEP * scale[j]
        dx = np.zeros(4)
        dx[j] = h
        A_jac[:, j] = (rhs(0.0, x0 + dx, tau) - rhs(0.0, x0 - dx, tau)) / (2.0 * h)

    h_tau = FD_RELATIVE_STEP * max(abs(tau), 1.0)
    B_jac = ((rhs(0.0, x0, tau + h_tau) - rhs(0.0, x0, tau - h_tau)) / (2.0 * h_tau)).reshape(4, 1)

    if not (np.all(np.isfinite(A_jac)) and np.all(np.isfinite(B_jac))):
        raise NumericalFault("jacobian", f"non-finite entry at {state}, tau={tau}")
    return Linearization(A_jac=A_jac, B_jac=B_jac, operating_state=state, operating_input=float(tau))


def step_settling_time(
    A: np.ndarray,
    B: np.ndarray,
    C: np.ndarray,
    band: float = SETTLING_BAND,
    n_points: int = 20001,
) -> float:
    """
    Settling time of the step response of a stable LTI system.

    The response is simulated over a horizon set by the slowest pole; the result is the last
    time the output leaves the ±band envelope around its final value, with the exit instant
    interpolated linearly between samples.

    Raises:
        InstabilityError: A is not Hurwitz, or the DC gain is zero.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.asarray(B, dtype=float).reshape(A.shape[0], -1)
    C = np.asarray(C, dtype=float).reshape(-1, A.shape[0])

    poles = np.linalg.eigvals(A)
    if np.any(poles.real >= 0):
        raise InstabilityError(f"Unstable linearization, poles: {np.round(poles, 6)}")

    y_final = float(-(C @ np.linalg.solve(A, B))[0, 0])
    if y_final == 0 or not math.isfinite(y_final):
        raise InstabilityError("Step response has zero DC gain; settling band undefined")

    horizon = 4.0 * -math.log(band) / float(np.min(np.abs(poles.real)))
    t = np.linspace(0.0, horizon, n_points)
    D = np.zeros((C.shape[0], B.shape[1]))
    _, y = signal.step(signal.StateSpace(A, B, C, D), T=t)

    excess = np.abs(y - y_final) - band * abs(y_final)
    outside = np.flatnonzero(excess > 0)
    if outside.size == 0:
        return 0.0
    i = int(outside[-1])
    if i == n_points - 1:
        raise NumericalFault("settling time", "response still outside the band at the horizon")
    e0, e1 = excess[i], excess[i + 1]
    return float(t[i] + (t[i + 1] - t[i]) * e0 / (e0 - e1))


def settling_time_at(state: PlantState, tau: float, params: CompressorParams) -> float:
    """Settling time of ps after a torque step, linearized at a known steady state."""
    lin = linearize(state, tau, params)
    if not lin.is_hurwitz():
        raise InstabilityError(f"Linearization at tau={tau} is not Hurwitz: {np.round(lin.eigenvalues, 6)}")
    return step_settling_time(lin.A_jac, lin.B_jac, np.array([[1.0, 0.0, 0.0, 0.0]]))


def settling_time(params: CompressorParams, tau_op: float) -> float:
    """Settling time [s] of the suction pressure for a torque step around the steady state at τ_op."""
    return settling_time_at(find_steady_state(params, tau_op), tau_op, params)


# ====================================================================================================
# 8. OPEN-LOOP SIMULATION
# ----------------------------------------------------------------------------------------------------
def simulate_open_loop(
    params: CompressorParams,
    state: PlantState,
    tau: float,
    t_final: float,
    dt_out: float,
    rtol: float = 1e-6,
    atol: float = 1e-8,
) -> Trace:
    """Integrate the plant at a fixed torque and sample on a uniform grid (ysp is NaN)."""
    n = int(math.floor(t_final / dt_out + 1e-9)) + 1
    t_grid = np.arange(n) * dt_out
    sol = integrate.solve_ivp(
        make_rhs(params), (0.0, t_grid[-1]), state.as_array(),
        method="RK45", t_eval=t_grid, args=(float(tau),),
        rtol=rtol, atol=atol * state.scale(),
    )
    if not sol.success:
        raise SimulationFault(sol.t[-1] if sol.t.size else 0.0, f"integrator failed: {sol.message}")

    ps, pd, m, omega = sol.y
    return Trace(
        t=t_grid, ps=ps, pd=pd, m=m, omega=omega,
        u_applied=np.full(n, float(tau)), ysp=np.full(n, np.nan), n_events=0,
    )
