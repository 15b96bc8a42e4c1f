# ====================================================================================================
# M01_load_project_config.py
# ----------------------------------------------------------------------------------------------------
# Loads the runtime configuration of one CLI invocation.
#   - Resolves --params / --config / --out / --jobs
#   - Layers values as flag > config file > default
#   - Exposes the validated controller, metric and simulation settings to the workflows
#
# Each workflow (implementation/I02_workflows.py) only ever sees a RunConfig.
# ----------------------------------------------------------------------------------------------------
# Author:         Gerry Pidgeon
# Created:        2025-11-07
# Project:        OFO Compressor Tuner
# ====================================================================================================


# ====================================================================================================
# 1. SYSTEM IMPORTS
# ----------------------------------------------------------------------------------------------------
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))
sys.dont_write_bytecode = True


# ====================================================================================================
# 2. PROJECT IMPORTS
# ----------------------------------------------------------------------------------------------------
from processes.P00_set_packages import *
from processes.P01_set_file_paths import DEFAULT_OUTPUT_DIR, build_output_paths
from processes.P04_static_lists import T_FINAL, DT_OUT, SETPOINT_IDS
from processes.P06_class_items import CompressorParams, ConfigError, MetricConfig, OfoConfig
from processes.P07_module_configs import (
    build_metric_config, build_ofo_config, layer, load_params, load_run_values,
)
from processes.P10_user_config import DEFAULT_JOBS, DEFAULT_NU, DEFAULT_DT


# ====================================================================================================
# 3. DEFAULTS
# ----------------------------------------------------------------------------------------------------
# Lowest layer; config files and CLI flags override these key by key.
# ----------------------------------------------------------------------------------------------------
RUN_DEFAULTS = {
    "nu": DEFAULT_NU,
    "dt": DEFAULT_DT,
    "t_final": T_FINAL,
    "dt_out": DT_OUT,
    "setpoint": "constant",
    "jobs": DEFAULT_JOBS,
}

# Flags that may shadow config-file keys (argparse dest == config key)
LAYERED_FLAGS = (
    "nu", "dt", "u_min", "u_max", "gradient_pressure_unit",
    "t_final", "dt_out", "gamma1", "deadband", "setpoint", "setpoint_file", "jobs",
)


# ====================================================================================================
# 4. RUN CONFIG
# ----------------------------------------------------------------------------------------------------
@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one workflow run."""

    command: str
    params_path: Optional[Path]
    config_path: Optional[Path]
    out_dir: Path
    values: Dict[str, Any] = field(default_factory=dict)
    options: Dict[str, Any] = field(default_factory=dict)

    @property
    def jobs(self) -> int:
        return int(self.values.get("jobs", DEFAULT_JOBS))

    @property
    def setpoint(self) -> str:
        return str(self.values.get("setpoint", "constant"))

    @property
    def setpoint_file(self) -> Optional[str]:
        return self.values.get("setpoint_file")

    @property
    def t_final(self) -> float:
        return float(self.values["t_final"])

    @property
    def dt_out(self) -> float:
        return float(self.values["dt_out"])

    def load_params(self) -> CompressorParams:
        return load_params(self.params_path)

    def ofo_config(self) -> OfoConfig:
        return build_ofo_config(self.values)

    def metric_config(self) -> MetricConfig:
        return build_metric_config(self.values)

    def output_paths(self) -> Dict[str, Path]:
        return build_output_paths(self.out_dir)


def _existing_file(path: Optional[str], label: str) -> Optional[Path]:
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"{label} not found: {p}")
    return p


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Assemble a RunConfig from parsed CLI arguments.

    Raises:
        ConfigError: missing/unparseable files, unknown setpoint or unwritable output folder.
    """
    params_path = _existing_file(getattr(args, "params", None), "Params file")
    config_path = _existing_file(getattr(args, "config", None), "Config file")

    flags = {key: getattr(args, key, None) for key in LAYERED_FLAGS}
    values = layer(RUN_DEFAULTS, load_run_values(config_path), flags)

    if values["setpoint"] not in SETPOINT_IDS:
        raise ConfigError(f"Unknown setpoint '{values['setpoint']}', expected one of {SETPOINT_IDS}")

    out_dir = Path(getattr(args, "out", None) or DEFAULT_OUTPUT_DIR)
    build_output_paths(out_dir)

    options = {k: v for k, v in vars(args).items() if k not in LAYERED_FLAGS + ("params", "config", "out", "command")}
    return RunConfig(
        command=args.command, params_path=params_path, config_path=config_path,
        out_dir=out_dir, values=values, options=options,
    )


# ====================================================================================================
# 5. PROJECT MAIN LAUNCHER (CALLED BY M00)
# ----------------------------------------------------------------------------------------------------
def launch_project_main(args: argparse.Namespace) -> int:
    """
    Called by M00 after argument parsing.
    Builds the RunConfig and delegates to the project-level launcher (I01_project_launcher.py).
    """
    from implementation.I01_project_launcher import launch_workflow

    run_config = build_run_config(args)
    return launch_workflow(run_config)


# ====================================================================================================
# END OF FILE
# ====================================================================================================
