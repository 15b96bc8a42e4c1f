# ====================================================================================================
# M00_run_cli.py
# ----------------------------------------------------------------------------------------------------
# *** MAIN APPLICATION ENTRY POINT ***
#
# Purpose:
#   - Entry point for the whole application.
#   - Adds the project root to sys.path so /processes modules can be imported.
#   - Parses the subcommand and flags, then hands over to the project launch chain:
#         M00 → M01_load_project_config → implementation/I01_project_launcher → I02_workflows
#
# Usage:
#   python main/M00_run_cli.py simulate --nu 150 --dt 47.5 --setpoint constant --out outputs/manual
#   python main/M00_run_cli.py tune --beta 150,50 --beta 37.5,50 --out outputs/tune
#
# Exit codes: 0 success, 1 configuration error, 2 simulation fault.
# ----------------------------------------------------------------------------------------------------
# Author:       Gerry Pidgeon
# Created:      2025-11-06
# Project:      OFO Compressor Tuner
# ====================================================================================================


# ====================================================================================================
# 1. SYSTEM IMPORTS
# ----------------------------------------------------------------------------------------------------
import sys
from pathlib import Path

# Add project root (…/project/) to sys.path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
sys.dont_write_bytecode = True


# ====================================================================================================
# 2. PROJECT IMPORTS
# ----------------------------------------------------------------------------------------------------
from processes.P00_set_packages import *                      # Common imports (argparse, logging, etc.)
from processes.P04_static_lists import SETPOINT_IDS, VALIDATION_TRAJECTORIES
from processes.P06_class_items import ConfigError
from main.M01_load_project_config import launch_project_main

logger = logging.getLogger(__name__)


# ====================================================================================================
# 3. ARGUMENT PARSING
# ----------------------------------------------------------------------------------------------------
class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors raise ConfigError (exit 1) instead of exiting with 2."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from e


def _beta_pair(text: str) -> Tuple[float, float]:
    values = _float_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected 'beta1,beta2', got '{text}'")
    return values[0], values[1]


def _parameter_set(text: str) -> Tuple[str, float, float]:
    name, sep, rest = text.partition("=")
    values = _float_list(rest) if sep else []
    if not name or len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected 'NAME=nu,dt', got '{text}'")
    return name, values[0], values[1]


def build_parser() -> CliArgumentParser:
    # --- Flags shared by every subcommand ---
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="Compressor params file (flat JSON, SI; '_bar' keys allowed)")
    common.add_argument("--config", help="Run config file (flat JSON); flags override its values")
    common.add_argument("--out", help="Output directory (default: ./outputs)")
    common.add_argument("--jobs", type=int, help="Worker threads (0 = one per CPU)")

    # --- Controller / horizon / metric flags ---
    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--nu", type=float, help="Reduced gain ν = αG⁻¹")
    run.add_argument("--dt", type=float, help="Sampling time ΔT [s]")
    run.add_argument("--u-min", dest="u_min", type=float, help="Lower torque bound [Nm]")
    run.add_argument("--u-max", dest="u_max", type=float, help="Upper torque bound [Nm]")
    run.add_argument("--gradient-unit", dest="gradient_pressure_unit", choices=("bar", "Pa"))
    run.add_argument("--t-final", dest="t_final", type=float, help="Horizon [s]")
    run.add_argument("--dt-out", dest="dt_out", type=float, help="Output grid spacing [s]")
    run.add_argument("--gamma1", type=float, help="Error scaling γ1")
    run.add_argument("--deadband", type=float, help="Crossing hysteresis [Pa]")
    run.add_argument("--setpoint", choices=SETPOINT_IDS)
    run.add_argument("--setpoint-file", dest="setpoint_file", help="CSV with columns t, ysp_bar (or ysp)")

    parser = CliArgumentParser(prog="ofo-tuner", description="OFO closed-loop simulator and auto-tuner")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common, run], help="One closed-loop run")
    p.add_argument("--start", choices=("operating", "validation"), default="operating",
                   help="Initial condition: nominal steady state or the validation state")

    p = sub.add_parser("sweep", parents=[common, run], help="(ν, ΔT) grid of metrics")
    p.add_argument("--nu-values", dest="nu_values", type=_float_list, help="e.g. 0.001,0.1,1,10,1000")
    p.add_argument("--dt-values", dest="dt_values", type=_float_list, help="e.g. 0.005,0.05,0.5,5,50")

    p = sub.add_parser("tune", parents=[common, run], help="Maximise ΔT under (β1, β2) thresholds")
    p.add_argument("--beta", dest="schedule", type=_beta_pair, action="append",
                   help="Threshold pair 'beta1,beta2'; repeat in decreasing order (default: built-in schedule)")
    p.add_argument("--budget", type=int, help="Closed-loop evaluations per β pair")
    p.add_argument("--initial", type=_float_list, help="Initial 'nu,dt'")
    p.add_argument("--warm-start", dest="warm_start", action="store_true",
                   help="Seed each β pair with the previous tuned point")

    p = sub.add_parser("validate", parents=[common, run], help="Error matrix of parameter sets")
    p.add_argument("--set", dest="sets", type=_parameter_set, action="append",
                   help="Parameter set 'NAME=nu,dt'; repeatable (default: user slots)")
    p.add_argument("--from-summary", dest="from_summary",
                   help="tune_summary.csv whose feasible rows are added as sets 'beta_<b1>_<b2>'")
    p.add_argument("--trajectories", nargs="*", choices=VALIDATION_TRAJECTORIES + ("constant",),
                   help="Validation trajectories (default: step sine)")

    p = sub.add_parser("calibrate", parents=[common], help="Fit the surrogate compressor")
    p.add_argument("--targets", help="Calibration targets file (flat JSON; '_bar' keys allowed)")
    p.add_argument("--settling-goal", dest="settling_goal", type=float, help="Settling-time goal [s]")

    return parser


# ====================================================================================================
# 4. MAIN EXECUTION
# ----------------------------------------------------------------------------------------------------
def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, launch the workflow and return its exit code."""
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "initial", None) is not None and len(args.initial) != 2:
            raise ConfigError("--initial expects 'nu,dt'")
        return launch_project_main(args)
    except ConfigError as e:
        logger.error(str(e))
        print(f"❌ Configuration error: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
