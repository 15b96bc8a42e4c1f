# ====================================================================================================
# P12_tuner.py
# ----------------------------------------------------------------------------------------------------
# Sampling-time maximisation over (ν, ΔT) subject to ε ≤ β1 and |F| ≤ β2.
#
# Purpose:
#   - evaluate: one closed-loop run plus both metrics.
#   - Evaluator: per-session memo, budget accounting and concurrent poll evaluation.
#   - tune: deterministic compass search in scaled coordinates with an extreme barrier.
#   - sweep: Cartesian (ν, ΔT) grids for contour plots.
#
# Scaled coordinates:
#   ν is mapped linearly onto [0, 1]; ΔT logarithmically, since its range spans several decades.
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
from processes.P02_system_processes import run_ordered
from processes.P04_static_lists import NU_BOUNDS, DT_LOWER_BOUND, INITIAL_GUESS, TUNE_BUDGET, SWEEP_COLUMNS
from processes.P07_module_configs import load_params, with_gains
from processes.P06_class_items import (
    CompressorParams, EvalRecord, MetricConfig, OfoConfig, SimSpec, TuneResult,
    ConfigError, SimulationFault,
)
from processes.P09_closed_loop import make_setpoint, run_closed_loop, tuning_sim_spec
from processes.P11_metrics import ise, oscillations

logger = logging.getLogger(__name__)

INITIAL_MESH = 0.25
MIN_MESH = 1e-3
POLL_DIRECTIONS = ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0))

EvaluateFn = Callable[[float, float], Tuple[float, int]]


# ====================================================================================================
# 3. TUNING SPECIFICATION
# ----------------------------------------------------------------------------------------------------
@dataclass(frozen=True)
class TuneSpec:
    """
    Everything one tuning session (or sweep) needs.

    dt_bounds defaults to [5e-3, t_final/2]; controller carries the non-tuned controller fields
    (bounds, gradient unit, QP) and is copied with each (ν, ΔT) candidate.
    """

    beta1: float = math.inf
    beta2: float = math.inf
    nu_bounds: Tuple[float, float] = NU_BOUNDS
    dt_bounds: Optional[Tuple[float, float]] = None
    initial: Tuple[float, float] = INITIAL_GUESS
    budget: int = TUNE_BUDGET
    setpoint: str = "constant"
    setpoint_path: Optional[str] = None
    sim: SimSpec = field(default_factory=tuning_sim_spec)
    params: Optional[CompressorParams] = None
    controller: Optional[OfoConfig] = None
    metric: Optional[MetricConfig] = None
    jobs: Optional[int] = 1

    def __post_init__(self):
        if not (self.beta1 > 0 and self.beta2 >= 0):
            raise ConfigError(f"Thresholds must be positive, got beta=({self.beta1}, {self.beta2})")
        lo, hi = self.nu_bounds
        if not 0 <= lo < hi:
            raise ConfigError(f"nu_bounds must satisfy 0 <= lower < upper, got {self.nu_bounds}")
        dlo, dhi = self.dt_range
        if not 0 < dlo < dhi:
            raise ConfigError(f"dt_bounds must satisfy 0 < lower < upper, got {(dlo, dhi)}")
        if not self.contains(*self.initial):
            raise ConfigError(f"Initial point {self.initial} lies outside the bounds")
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")

    @property
    def dt_range(self) -> Tuple[float, float]:
        return self.dt_bounds if self.dt_bounds is not None else (DT_LOWER_BOUND, self.sim.t_final / 2.0)

    @property
    def metric_config(self) -> MetricConfig:
        if self.metric is not None:
            return self.metric
        return MetricConfig(t_final=self.sim.t_final, dt_out=self.sim.dt_out)

    def contains(self, nu: float, dt: float) -> bool:
        lo, hi = self.nu_bounds
        dlo, dhi = self.dt_range
        return lo <= nu <= hi and dlo <= dt <= dhi

    # --- Scaled coordinates ---
    def to_scaled(self, nu: float, dt: float) -> Tuple[float, float]:
        lo, hi = self.nu_bounds
        dlo, dhi = self.dt_range
        return (nu - lo) / (hi - lo), math.log(dt / dlo) / math.log(dhi / dlo)

    def from_scaled(self, s_nu: float, s_dt: float) -> Tuple[float, float]:
        lo, hi = self.nu_bounds
        dlo, dhi = self.dt_range
        nu = lo + s_nu * (hi - lo)
        dt = dlo * math.exp(s_dt * math.log(dhi / dlo))
        return min(max(nu, lo), hi), min(max(dt, dlo), dhi)


# ====================================================================================================
# 4. SINGLE EVALUATION
# ----------------------------------------------------------------------------------------------------
def controller_for(nu: float, dt: float, spec: TuneSpec) -> OfoConfig:
    """Candidate controller: the session template with (ν, ΔT) replaced."""
    return with_gains(spec.controller, nu, dt)


def evaluate(nu: float, dt: float, spec: TuneSpec) -> Tuple[float, int]:
    """
    Run the closed loop at (ν, ΔT) and return (ε, |F|).

    Raises:
        SimulationFault: propagated; Evaluator turns it into an infeasible record.
    """
    params = spec.params if spec.params is not None else load_params(None)
    setpoint = make_setpoint(spec.setpoint, spec.setpoint_path)
    trace = run_closed_loop(spec.sim, controller_for(nu, dt, spec), setpoint, params)
    metric = spec.metric_config
    return ise(trace, metric), oscillations(trace, metric)


class Evaluator:
    """
    Memoised evaluation session.

    Results are keyed on the exact (ν, ΔT) floats; memo hits do not consume budget. The
    evaluation function is injectable so the search can run on analytic surrogates.
    """

    def __init__(self, spec: TuneSpec, evaluate_fn: Optional[EvaluateFn] = None):
        self.spec = spec
        self._fn = evaluate_fn or (lambda nu, dt: evaluate(nu, dt, spec))
        self._memo: Dict[Tuple[float, float], Tuple[float, Optional[int], Optional[str]]] = {}
        self._lock = threading.Lock()
        self.log: List[EvalRecord] = []

    @property
    def evaluations(self) -> int:
        return len(self._memo)

    @property
    def remaining(self) -> int:
        return max(self.spec.budget - self.evaluations, 0)

    def _raw(self, point: Tuple[float, float]) -> Tuple[float, Optional[int], Optional[str]]:
        nu, dt = point
        try:
            epsilon, count = self._fn(nu, dt)
            return float(epsilon), int(count), None
        except SimulationFault as e:
            logger.warning(f"Evaluation (nu={nu:g}, dt={dt:g}) faulted: {e}")
            return math.nan, None, str(e)

    def record(self, point: Tuple[float, float]) -> EvalRecord:
        """EvalRecord for an already evaluated point, judged against the session thresholds."""
        epsilon, count, fault = self._memo[point]
        feasible = fault is None and epsilon <= self.spec.beta1 and count <= self.spec.beta2
        return EvalRecord(nu=point[0], dt=point[1], epsilon=epsilon, oscillations=count,
                          feasible=feasible, fault=fault)

    def evaluate_many(self, points: Sequence[Tuple[float, float]]) -> List[EvalRecord]:
        """
        Evaluate points (concurrently up to spec.jobs) in input order.

        New points beyond the remaining budget are dropped; already known points are returned
        from the memo.
        """
        with self._lock:
            known = set(self._memo)
        fresh: List[Tuple[float, float]] = []
        for point in points:
            if point not in known and point not in fresh:
                fresh.append(point)
        fresh = fresh[: self.remaining]

        results = run_ordered(self._raw, fresh, self.spec.jobs)
        with self._lock:
            for point, result in zip(fresh, results):
                self._memo[point] = result
        for point in fresh:
            self.log.append(self.record(point))

        return [self.record(p) for p in points if p in self._memo]

    def __call__(self, nu: float, dt: float) -> EvalRecord:
        records = self.evaluate_many([(nu, dt)])
        if not records:
            raise ConfigError("Evaluation budget exhausted")
        return records[0]


# ====================================================================================================
# 5. RANKING
# ----------------------------------------------------------------------------------------------------
def violation(record: EvalRecord, spec: TuneSpec) -> float:
    """Normalised constraint violation (0 when feasible, inf for faulted runs)."""
    if record.fault is not None:
        return math.inf
    v_eps = max(0.0, (record.epsilon - spec.beta1) / spec.beta1)
    v_osc = max(0.0, (record.oscillations - spec.beta2) / max(spec.beta2, 1.0))
    return v_eps + v_osc


def rank_key(record: EvalRecord, spec: TuneSpec) -> Tuple:
    """Smaller is better: feasible first by largest ΔT, smallest ε, fewest crossings."""
    if record.feasible:
        return (0, -record.dt, record.epsilon, record.oscillations, record.nu)
    return (1, violation(record, spec), -record.dt, record.nu)


# ====================================================================================================
# 6. COMPASS SEARCH
# ----------------------------------------------------------------------------------------------------
def tune(spec: TuneSpec, evaluate_fn: Optional[EvaluateFn] = None) -> TuneResult:
    """
    Maximise ΔT subject to ε ≤ β1 and |F| ≤ β2.

    Complete polling along ±ν and ±ΔT at the current mesh (candidates clipped to the box),
    incumbent moved to the best-ranked candidate if it improves, mesh halved otherwise.
    Stops when the mesh drops below 1e-3 or the budget is spent. The returned point is the
    best feasible point of the whole log, or the least violating one when none is feasible.
    """
    evaluator = Evaluator(spec, evaluate_fn)
    key = lambda rec: rank_key(rec, spec)

    s = spec.to_scaled(*spec.initial)
    incumbent = evaluator(*spec.initial)
    mesh = INITIAL_MESH

    while mesh >= MIN_MESH and evaluator.remaining > 0:
        candidates: List[Tuple[Tuple[float, float], Tuple[float, float]]] = []
        for d_nu, d_dt in POLL_DIRECTIONS:
            trial = (min(max(s[0] + mesh * d_nu, 0.0), 1.0), min(max(s[1] + mesh * d_dt, 0.0), 1.0))
            if trial == s or any(trial == c[0] for c in candidates):
                continue
            candidates.append((trial, spec.from_scaled(*trial)))

        records = evaluator.evaluate_many([point for _, point in candidates])
        by_point = {(r.nu, r.dt): r for r in records}
        polled = [(trial, by_point[point]) for trial, point in candidates if point in by_point]

        best = min(polled, key=lambda item: key(item[1]), default=None)
        if best is not None and key(best[1]) < key(incumbent):
            s, incumbent = best
        else:
            mesh /= 2.0
        logger.debug(f"Poll: mesh={mesh:.4g}, incumbent nu={incumbent.nu:.6g} dt={incumbent.dt:.6g} "
                     f"eps={incumbent.epsilon:.6g} F={incumbent.oscillations} feasible={incumbent.feasible}")

    final = min(evaluator.log, key=key)
    logger.info(f"Tuning (beta=[{spec.beta1:g}, {spec.beta2:g}]) finished after {evaluator.evaluations} "
                f"evaluations: nu={final.nu:.6g}, dt={final.dt:.6g}, feasible={final.feasible}")
    return TuneResult(
        nu_star=final.nu, dt_star=final.dt, epsilon_star=final.epsilon,
        oscillations_star=final.oscillations, feasible=final.feasible,
        beta1=spec.beta1, beta2=spec.beta2, evaluations=evaluator.evaluations,
        eval_log=tuple(evaluator.log),
    )


def tune_schedule(schedule: Sequence[Tuple[float, float]], base: TuneSpec, warm_start: bool = False,
                  evaluate_fn: Optional[EvaluateFn] = None) -> List[TuneResult]:
    """
    Tune for each (β1, β2) pair in order.

    With warm_start, a feasible result seeds the initial point of the next pair.
    """
    if not schedule:
        raise ConfigError("The beta schedule is empty")

    results: List[TuneResult] = []
    initial = base.initial
    for beta1, beta2 in schedule:
        spec = replace(base, beta1=float(beta1), beta2=float(beta2), initial=initial)
        result = tune(spec, evaluate_fn)
        results.append(result)
        if warm_start and result.feasible:
            initial = (result.nu_star, result.dt_star)
    return results


# ====================================================================================================
# 7. PARAMETER SWEEP
# ----------------------------------------------------------------------------------------------------
def sweep(nu_values: Sequence[float], dt_values: Sequence[float], spec: TuneSpec,
          evaluate_fn: Optional[EvaluateFn] = None) -> pd.DataFrame:
    """
    Full Cartesian grid, ν outer and ΔT inner, in the order given.

    Faulted cells carry NaN metrics.

    Raises:
        ConfigError: an empty axis, or a grid point outside the tuning bounds.
    """
    if len(nu_values) == 0 or len(dt_values) == 0:
        raise ConfigError("Sweep axes must each hold at least one value")
    points = [(float(nu), float(dt)) for nu in nu_values for dt in dt_values]
    outside = [p for p in points if not spec.contains(*p)]
    if outside:
        raise ConfigError(f"Sweep points outside bounds nu={spec.nu_bounds}, dt={spec.dt_range}: {outside}")

    evaluator = Evaluator(replace(spec, budget=max(len(points), 1)), evaluate_fn)
    records = evaluator.evaluate_many(points)
    df = pd.DataFrame(
        [(r.nu, r.dt, r.epsilon, np.nan if r.oscillations is None else r.oscillations) for r in records],
        columns=list(SWEEP_COLUMNS),
    )
    return df
