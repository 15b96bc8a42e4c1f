# ====================================================================================================
# I02_workflows.py
# ----------------------------------------------------------------------------------------------------
# Purpose:
#   Project workflows behind the CLI subcommands:
#     simulate  - one closed-loop run      -> trace.csv, metrics.json, ofo_config.json
#     sweep     - (ν, ΔT) grid             -> sweep.csv
#     tune      - β schedule replay        -> tune_beta_*.json, tune_summary.csv/.txt, ofo_config.json
#     validate  - parameter sets × traj.   -> validation_errors.csv/.txt
#     calibrate - surrogate plant fit      -> compressor_params.json, calibration_report.txt
#
#   Every cmd_* returns an exit code: 0 success, 1 configuration error, 2 simulation fault.
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
from processes.P01_set_file_paths import tune_result_name
from processes.P02_system_processes import run_ordered
from processes.P03_shared_functions import format_aligned_table, pa_to_bar, write_csv, write_json, write_text
from processes.P04_static_lists import (
    DEFAULT_BETA_SCHEDULE, SWEEP_NU_VALUES, SWEEP_DT_VALUES, TUNE_SUMMARY_COLUMNS,
    VALIDATION_TRAJECTORIES, INITIAL_GUESS, TUNE_BUDGET,
)
from processes.P05b_plant_calibration import calibrate, calibration_report
from processes.P06_class_items import (
    CalibrationError, ConfigError, OfoToolError, SimulationFault,
)
from processes.P07_module_configs import load_targets, load_tuned_sets, ofo_config_to_flat, save_params, with_gains
from processes.P09_closed_loop import (
    make_setpoint, run_closed_loop, save_trace, tuning_sim_spec, validation_sim_spec,
)
from processes.P10_user_config import parameter_sets
from processes.P11_metrics import beta1_baseline, beta2_baseline, ise, metrics_summary
from processes.P12_tuner import TuneSpec, sweep, tune_schedule
from main.M01_load_project_config import RunConfig

logger = logging.getLogger(__name__)


# ====================================================================================================
# 3. EXIT-CODE MAPPING
# ----------------------------------------------------------------------------------------------------
def exit_codes(fn: Callable[[RunConfig], None]) -> Callable[[RunConfig], int]:
    """Run a workflow and translate project errors into CLI exit codes."""

    @wraps(fn)
    def wrapper(run_config: RunConfig) -> int:
        try:
            fn(run_config)
        except (ConfigError, CalibrationError) as e:
            logger.error(f"{fn.__name__}: {e}")
            print(f"❌ Configuration error: {e}")
            return 1
        except SimulationFault as e:
            logger.error(f"{fn.__name__}: {e}")
            print(f"❌ Simulation fault: {e}")
            return 2
        except OfoToolError as e:
            logger.error(f"{fn.__name__}: {e}")
            print(f"❌ Runtime error: {e}")
            return 2
        return 0

    return wrapper


# ====================================================================================================
# 4. SHARED BUILDERS
# ----------------------------------------------------------------------------------------------------
def _option(rc: RunConfig, key: str, default):
    """Subcommand option, falling back only when it was not given (empty values stay invalid)."""
    value = rc.options.get(key)
    return default if value is None else value


def _tune_spec(rc: RunConfig, params, **overrides) -> TuneSpec:
    """Session spec shared by sweep and tune: plant, controller template, metrics, horizon."""
    return TuneSpec(
        sim=tuning_sim_spec(rc.t_final, rc.dt_out),
        params=params,
        controller=rc.ofo_config(),
        metric=rc.metric_config(),
        setpoint=rc.setpoint,
        setpoint_path=rc.setpoint_file,
        jobs=rc.jobs,
        **overrides,
    )


# ====================================================================================================
# 5. WORKFLOWS
# ----------------------------------------------------------------------------------------------------
@exit_codes
def cmd_simulate(rc: RunConfig) -> None:
    """One closed-loop run from the operating point (or the validation state with --start validation)."""
    paths = rc.output_paths()
    cfg = rc.ofo_config()
    metric = rc.metric_config()
    params = rc.load_params()
    setpoint = make_setpoint(rc.setpoint, rc.setpoint_file)

    if rc.options.get("start", "operating") == "validation":
        sim = validation_sim_spec(params, rc.t_final, rc.dt_out)
    else:
        sim = tuning_sim_spec(rc.t_final, rc.dt_out)

    trace = run_closed_loop(sim, cfg, setpoint, params)
    save_trace(trace, paths["trace"])
    summary = metrics_summary(trace, sim.initial_state.ps, setpoint, metric)
    write_json(summary, paths["metrics"])
    write_json(ofo_config_to_flat(cfg), paths["ofo_config"])
    print(f"✅ Simulated nu={cfg.nu}, dt={cfg.dt}: epsilon={summary['epsilon']:.4f}, "
          f"oscillations={summary['oscillations']}, final ps={pa_to_bar(trace.ps[-1]):.4f} bar")


@exit_codes
def cmd_sweep(rc: RunConfig) -> None:
    paths = rc.output_paths()
    nu_values = _option(rc, "nu_values", list(SWEEP_NU_VALUES))
    dt_values = _option(rc, "dt_values", list(SWEEP_DT_VALUES))
    spec = _tune_spec(rc, rc.load_params())

    grid = sweep(nu_values, dt_values, spec)
    write_csv(grid, paths["sweep"])
    print(f"✅ Swept {len(grid)} (nu, dt) points.")


@exit_codes
def cmd_tune(rc: RunConfig) -> None:
    """Replay a β schedule; one result file per pair plus a summary table."""
    schedule = rc.options.get("schedule")
    if schedule is None:
        schedule = list(DEFAULT_BETA_SCHEDULE)
    if not schedule:
        raise ConfigError("The beta schedule is empty")

    paths = rc.output_paths()
    initial = _option(rc, "initial", INITIAL_GUESS)
    budget = _option(rc, "budget", TUNE_BUDGET)
    base = _tune_spec(rc, rc.load_params(), initial=tuple(initial), budget=int(budget))
    write_json(ofo_config_to_flat(base.controller), paths["ofo_config"])

    results = tune_schedule(schedule, base, warm_start=bool(rc.options.get("warm_start", False)))

    rows = []
    for result in results:
        write_json(result.to_dict(), paths["root"] / tune_result_name(result.beta1, result.beta2))
        rows.append((result.beta1, result.beta2, result.nu_star, result.dt_star,
                     result.epsilon_star, result.oscillations_star, result.feasible))
        flag = "✅" if result.feasible else "⚠️"
        print(f"{flag} beta=[{result.beta1:g}, {result.beta2:g}]: nu={result.nu_star:.4g}, "
              f"dt={result.dt_star:.4g}, feasible={result.feasible}")

    frozen_eps = beta1_baseline(base.sim.initial_state.ps, make_setpoint(rc.setpoint, rc.setpoint_file),
                                base.metric_config)
    header = (f"Frozen-controller baselines: beta1={frozen_eps:.6g}, "
              f"beta2={beta2_baseline(rc.t_final):g}\n\n")
    summary = pd.DataFrame(rows, columns=list(TUNE_SUMMARY_COLUMNS))
    write_csv(summary, paths["tune_summary_csv"])
    write_text(header + format_aligned_table(summary), paths["tune_summary_txt"])


@exit_codes
def cmd_validate(rc: RunConfig) -> None:
    """Error matrix of parameter sets (rows) against validation trajectories (columns)."""
    explicit = rc.options.get("sets")
    summary_path = rc.options.get("from_summary")
    if explicit is None and summary_path is None:
        sets = parameter_sets()
    else:
        sets = list(explicit or []) + (load_tuned_sets(summary_path) if summary_path else [])
    trajectories = rc.options.get("trajectories")
    if trajectories is None:
        trajectories = list(VALIDATION_TRAJECTORIES)
    if not trajectories:
        raise ConfigError("No validation trajectories requested")
    if not sets:
        raise ConfigError("No parameter sets given")
    names = [name for name, _, _ in sets]
    if len(set(names)) != len(names):
        raise ConfigError(f"Duplicate parameter set names: {names}")
    if len(set(trajectories)) != len(trajectories):
        raise ConfigError(f"Duplicate trajectories: {trajectories}")

    paths = rc.output_paths()
    params = rc.load_params()
    metric = rc.metric_config()
    sim = validation_sim_spec(params, rc.t_final, rc.dt_out)
    setpoints = {name: make_setpoint(name, rc.setpoint_file) for name in trajectories}
    template = rc.ofo_config()
    configs = {name: with_gains(template, nu, dt) for name, nu, dt in sets}

    jobs = [(set_name, traj) for set_name, _, _ in sets for traj in trajectories]

    def run_one(job):
        set_name, traj = job
        return ise(run_closed_loop(sim, configs[set_name], setpoints[traj], params), metric)

    errors = dict(zip(jobs, run_ordered(run_one, jobs, rc.jobs)))

    matrix = pd.DataFrame(
        [[name, nu, dt] + [errors[(name, traj)] for traj in trajectories] for name, nu, dt in sets],
        columns=["set", "nu", "dt"] + list(trajectories),
    )
    write_csv(matrix, paths["validation_csv"])
    write_text(format_aligned_table(matrix), paths["validation_txt"])
    print(f"✅ Validated {len(sets)} parameter sets on {len(trajectories)} trajectories.")


@exit_codes
def cmd_calibrate(rc: RunConfig) -> None:
    paths = rc.output_paths()
    overrides = {"settling_goal": rc.options.get("settling_goal")}
    targets = load_targets(rc.options.get("targets"), overrides)

    params = calibrate(targets)
    save_params(params, paths["params"])
    write_text(calibration_report(params, targets), paths["calibration_report"])
    print(f"✅ Calibrated plant written to {paths['params']}")
