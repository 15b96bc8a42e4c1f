# ====================================================================================================
# P06_class_items.py
# ----------------------------------------------------------------------------------------------------
# Purpose:
#   Shared class definitions for the whole project:
#     - the exception hierarchy every module raises from,
#     - validated configuration models (pydantic) that round-trip through flat JSON files,
#     - frozen runtime value records (dataclasses) passed between the plant, controller,
#       closed loop, metrics and tuner modules.
#
#   Nothing in here talks to the filesystem; loading/saving lives in P07.
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
from processes.P00_set_packages import *  # Imports all packages from P00_set_packages.py
from typing import Literal

from processes.P04_static_lists import TORQUE_BOUNDS


# ====================================================================================================
# 3. EXCEPTIONS
# ----------------------------------------------------------------------------------------------------
# The CLI maps ConfigError -> exit 1 and SimulationFault -> exit 2.
# ====================================================================================================
class OfoToolError(Exception):
    """Base class for every error raised by this project."""


class ConfigError(OfoToolError):
    """Invalid or unreadable configuration (files, flags, value ranges)."""


class NumericalFault(OfoToolError):
    """A non-finite value appeared in a plant evaluation."""

    def __init__(self, term: str, message: str = ""):
        self.term = term
        super().__init__(f"Non-finite value in '{term}'" + (f": {message}" if message else ""))


class MapDomainError(OfoToolError):
    """The compressor map is evaluated where Π ≤ 0 (or m ≤ 0), so h is undefined."""


class InstabilityError(OfoToolError):
    """A linearization is not Hurwitz, so no settling time exists."""


class CalibrationError(OfoToolError):
    """Calibration targets cannot be met; `report` holds the residual breakdown."""

    def __init__(self, message: str, report: str = ""):
        self.report = report
        super().__init__(message if not report else f"{message}\n{report}")


class QpInfeasible(OfoToolError):
    """The QP constraint set is empty."""


class QpStalled(OfoToolError):
    """The active-set iteration hit its iteration cap."""


class SimulationFault(OfoToolError):
    """Plant invariant violation or integrator failure during a run."""

    def __init__(self, t: float, reason: str):
        self.t = float(t)
        self.reason = reason
        super().__init__(f"Simulation fault at t={self.t:.6g} s: {reason}")


# ====================================================================================================
# 4. CONFIGURATION MODELS (PYDANTIC)
# ----------------------------------------------------------------------------------------------------
# These are the objects that serialise to the flat key-value config files (SI units).
# ====================================================================================================


class CompressorParams(BaseModel):
    """Physical constants of the compressor ODE, boundary valves and quadratic compressor map."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a01:   float = Field(gt=0, description="Sonic-velocity constant [m/s]")
    Vs:    float = Field(gt=0, description="Suction volume [m^3]")
    Vd:    float = Field(gt=0, description="Discharge volume [m^3]")
    A1:    float = Field(gt=0, description="Duct area [m^2]")
    Lc:    float = Field(gt=0, description="Duct length [m]")
    J:     float = Field(gt=0, description="Shaft inertia [kg m^2]")
    delta: float = Field(0.00729, gt=0, description="Torque coefficient [-]")
    kin:   float = Field(gt=0, description="Inlet valve gain")
    kout:  float = Field(gt=0, description="Outlet valve gain")
    Ain:   float = Field(gt=0, description="Inlet valve area [m^2]")
    Aout:  float = Field(gt=0, description="Outlet valve area [m^2]")
    pin:   float = Field(1.05e5, gt=0, description="Suction-side external pressure [Pa]")
    pout:  float = Field(1.55e5, gt=0, description="Discharge-side external pressure [Pa]")
    map_coeffs: Tuple[float, float, float, float, float, float] = Field(
        description="c1..c6 of Π = c1 + c2 m + c3 ω + c4 m² + c5 m ω + c6 ω²"
    )

    @field_validator("map_coeffs")
    @classmethod
    def check_map_coeffs(cls, v):
        """All six map coefficients must be finite."""
        if not all(math.isfinite(c) for c in v):
            raise ValueError("map_coeffs must be finite")
        return v

    @model_validator(mode="after")
    def check_pressures(self):
        """External suction pressure must sit below the discharge pressure."""
        if not self.pin < self.pout:
            raise ValueError(f"pin ({self.pin}) must be below pout ({self.pout})")
        return self


class QpConfig(BaseModel):
    """Full QP variant of the update: step α, metric G and the input/output constraint sets."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(gt=0)
    G: List[List[float]]
    A: List[List[float]] = Field(default_factory=list)
    b: List[float] = Field(default_factory=list)
    C: List[List[float]] = Field(default_factory=list)
    d: List[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shapes(self):
        """G must be symmetric positive-definite; A/b and C/d must agree in row count."""
        G = np.asarray(self.G, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] == 0:
            raise ValueError(f"G must be a non-empty square matrix, got shape {G.shape}")
        if not np.allclose(G, G.T, rtol=1e-12, atol=1e-12):
            raise ValueError("G must be symmetric")
        if np.min(np.linalg.eigvalsh(G)) <= 0:
            raise ValueError("G must be positive-definite")

        p = G.shape[0]
        if self.A:
            A = np.asarray(self.A, dtype=float)
            if A.ndim != 2 or A.shape[1] != p:
                raise ValueError(f"A must have {p} columns")
            if len(self.b) != A.shape[0]:
                raise ValueError("b must have one entry per row of A")
        elif self.b:
            raise ValueError("b given without A")
        if self.C:
            C = np.asarray(self.C, dtype=float)
            if C.ndim != 2:
                raise ValueError("C must be a matrix")
            if len(self.d) != C.shape[0]:
                raise ValueError("d must have one entry per row of C")
        elif self.d:
            raise ValueError("d given without C")
        return self

    # --- Array views (rebuilt on demand; the model itself stays JSON-friendly) ---
    @property
    def n_inputs(self) -> int:
        return len(self.G)

    def arrays(self) -> Dict[str, np.ndarray]:
        p = self.n_inputs
        return {
            "G": np.asarray(self.G, dtype=float),
            "A": np.asarray(self.A, dtype=float).reshape(-1, p),
            "b": np.asarray(self.b, dtype=float),
            "C": np.asarray(self.C, dtype=float) if self.C else np.zeros((0, 0)),
            "d": np.asarray(self.d, dtype=float),
        }


class OfoConfig(BaseModel):
    """Controller configuration: reduced gain ν, sampling time ΔT, input bounds, optional QP."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    nu: float | List[float] = Field(description="ν = αG⁻¹ per input, ≥ 0")
    dt: float = Field(gt=0, description="Sampling time ΔT [s]")
    u_min: float | List[float] = TORQUE_BOUNDS["u_min"]
    u_max: float | List[float] = TORQUE_BOUNDS["u_max"]
    gradient_pressure_unit: Literal["bar", "Pa"] = "bar"
    qp: Optional[QpConfig] = None

    @field_validator("nu")
    @classmethod
    def check_nu(cls, v):
        """ν must be finite and non-negative in every component."""
        arr = np.atleast_1d(np.asarray(v, dtype=float))
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("nu must be finite and >= 0")
        return v

    @model_validator(mode="after")
    def check_bounds(self):
        """u_min < u_max component-wise."""
        lo = np.atleast_1d(np.asarray(self.u_min, dtype=float))
        hi = np.atleast_1d(np.asarray(self.u_max, dtype=float))
        if lo.shape != hi.shape or not np.all(lo < hi):
            raise ValueError(f"u_min ({self.u_min}) must be below u_max ({self.u_max})")
        return self

    @property
    def pressure_scale(self) -> float:
        """Pa per gradient-unit (1e5 for bar, 1 for Pa)."""
        return 1e5 if self.gradient_pressure_unit == "bar" else 1.0


class MetricConfig(BaseModel):
    """Scaling and tolerances of the performance functionals."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma1: float = Field(1e-8, gt=0)
    deadband: float = Field(10.0, ge=0, description="Crossing hysteresis [Pa]")
    t_final: float = Field(200.0, gt=0)
    dt_out: float = Field(0.01, gt=0, description="Grid spacing used by beta1_baseline [s]")


class CalibrationTargets(BaseModel):
    """Steady state and dynamic goals that calibration pins the surrogate plant to."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # --- Operating point (SI) ---
    ps:    float = Field(gt=0)
    pd:    float = Field(gt=0)
    m:     float = Field(gt=0)
    omega: float = Field(gt=0)
    tau:   float = Field(gt=0)
    pin:   float = Field(1.05e5, gt=0)
    pout:  float = Field(1.55e5, gt=0)

    # --- Dynamic goal ---
    settling_goal:      float = Field(47.5, gt=0)
    settling_tolerance: float = Field(10.0, gt=0)
    inertia_bracket:    Tuple[float, float] = (1e-2, 1e4)

    # --- Map shape at the operating point ---
    map_mass_slope:  float = -0.001     # ∂Π/∂m  [1/(kg/s)]
    map_speed_slope: float = 0.0037     # ∂Π/∂ω  [1/(rad/s)]

    # --- Geometry held fixed during calibration ---
    a01: float = Field(340.0, gt=0)
    Vs:  float = Field(50.0, gt=0)
    Vd:  float = Field(20.0, gt=0)
    A1:  float = Field(0.05, gt=0)
    Lc:  float = Field(5.0, gt=0)
    Ain: float = Field(1.0, gt=0)
    Aout: float = Field(1.0, gt=0)
    delta_nominal: float = Field(0.00729, gt=0)

    # --- Optional pinned valve gains (otherwise solved for) ---
    kin:  Optional[float] = Field(None, gt=0)
    kout: Optional[float] = Field(None, gt=0)


# ====================================================================================================
# 5. RUNTIME VALUE RECORDS (DATACLASSES)
# ----------------------------------------------------------------------------------------------------
@dataclass(frozen=True)
class PlantState:
    """The four ODE states (SI): suction/discharge pressure, mass flow, shaft speed."""

    ps: float
    pd: float
    m: float
    omega: float

    def as_array(self) -> np.ndarray:
        return np.array([self.ps, self.pd, self.m, self.omega], dtype=float)

    @classmethod
    def from_array(cls, x: Sequence[float]) -> "PlantState":
        return cls(float(x[0]), float(x[1]), float(x[2]), float(x[3]))

    def scale(self) -> np.ndarray:
        """Per-component magnitude used for tolerances and finite-difference steps."""
        return np.maximum(np.abs(self.as_array()), 1.0)

    def is_physical(self) -> bool:
        return self.ps > 0 and self.pd > 0 and self.omega > 0


@dataclass(frozen=True)
class Linearization:
    A_jac: np.ndarray
    B_jac: np.ndarray
    operating_state: PlantState
    operating_input: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.A_jac)

    def is_hurwitz(self) -> bool:
        return bool(np.all(self.eigenvalues.real < 0))


@dataclass(frozen=True)
class ControllerState:
    u: float | np.ndarray
    k: int = 0


@dataclass(frozen=True)
class Trace:
    """Uniform-grid record of one closed-loop run (SI units)."""

    t: np.ndarray
    ps: np.ndarray
    pd: np.ndarray
    m: np.ndarray
    omega: np.ndarray
    u_applied: np.ndarray
    ysp: np.ndarray
    n_events: int = 0

    def __post_init__(self):
        n = len(self.t)
        for name in ("ps", "pd", "m", "omega", "u_applied", "ysp"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"Trace series '{name}' has length {len(getattr(self, name))}, expected {n}")

    @property
    def residual(self) -> np.ndarray:
        """Tracking residual ps − ysp [Pa]."""
        return self.ps - self.ysp

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": self.t, "ps": self.ps, "pd": self.pd, "m": self.m, "omega": self.omega,
            "u_applied": self.u_applied, "ysp": self.ysp,
        })


@dataclass(frozen=True)
class SimSpec:
    """Horizon, output grid, integrator tolerances and initial condition of one run."""

    initial_state: PlantState
    initial_torque: float
    t_final: float = 200.0
    dt_out: float = 0.01
    rtol: float = 1e-6
    atol: float = 1e-8      # relative to each state's magnitude

    def __post_init__(self):
        if not self.t_final > 0:
            raise ConfigError(f"t_final must be > 0, got {self.t_final}")
        if not self.dt_out > 0:
            raise ConfigError(f"dt_out must be > 0, got {self.dt_out}")
        if not (self.rtol > 0 and self.atol > 0):
            raise ConfigError("rtol and atol must be > 0")
        if not self.initial_state.is_physical():
            raise ConfigError(f"Initial state is not physical: {self.initial_state}")
        if not math.isfinite(self.initial_torque):
            raise ConfigError("initial_torque must be finite")


@dataclass(frozen=True)
class EvalRecord:
    """One (ν, ΔT) evaluation of the tuning problem."""

    nu: float
    dt: float
    epsilon: float                  # NaN when the run faulted
    oscillations: Optional[int]     # None when the run faulted
    feasible: bool
    fault: Optional[str] = None


@dataclass(frozen=True)
class TuneResult:
    nu_star: float
    dt_star: float
    epsilon_star: float
    oscillations_star: Optional[int]
    feasible: bool
    beta1: float
    beta2: float
    evaluations: int
    eval_log: Tuple[EvalRecord, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["eval_log"] = [asdict(r) for r in self.eval_log]
        return out
