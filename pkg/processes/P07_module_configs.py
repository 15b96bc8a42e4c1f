# ====================================================================================================
# P07_module_configs.py
# ----------------------------------------------------------------------------------------------------
# Central configuration hub: loads and saves the flat key-value config files and assembles the
# validated models with flag > file > default layering.
#
# Purpose:
#   - Read/write CompressorParams files (keys named exactly as fields, SI units).
#   - Build OfoConfig / MetricConfig / CalibrationTargets from files plus CLI overrides.
#   - Provide the cached, calibrated default plant used when no params file is given.
#   - Read tuned (ν, ΔT) sets back from a tune summary for validation.
#
# Usage:
#   from processes.P07_module_configs import load_params, default_params, build_ofo_config
#
# Example:
#   >>> build_ofo_config({"nu": 150, "dt": 47.5}).dt
#   47.5
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
from processes.P00_set_packages import *  # Imports all packages from P00_set_packages.py
from processes.P03_shared_functions import read_flat_config, validation_message, write_json
from processes.P05b_plant_calibration import calibrate, default_targets
from processes.P06_class_items import (
    CalibrationTargets, CompressorParams, ConfigError, MetricConfig, OfoConfig, QpConfig,
)

logger = logging.getLogger(__name__)

QP_KEY_PREFIX = "qp_"
OFO_KEYS = ("nu", "dt", "u_min", "u_max", "gradient_pressure_unit")
METRIC_KEYS = ("gamma1", "deadband", "t_final", "dt_out")


# ====================================================================================================
# 3. LAYERING
# ----------------------------------------------------------------------------------------------------
def layer(*sources: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """
    Merge dictionaries left to right; later sources win, None values never override.

    Call as layer(defaults, file_values, flag_values).
    """
    merged: Dict[str, Any] = {}
    for source in sources:
        for key, value in (source or {}).items():
            if value is not None:
                merged[key] = value
    return merged


def _build(model: type, values: Dict[str, Any], label: str):
    """Instantiate a pydantic model, turning ValidationError into ConfigError."""
    try:
        return model(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid {label}: {validation_message(e)}") from e


# ====================================================================================================
# 4. PLANT PARAMETERS
# ----------------------------------------------------------------------------------------------------
@lru_cache(maxsize=1)
def default_params() -> CompressorParams:
    """Calibrated surrogate plant for the nominal rig targets (computed once per process)."""
    logger.info("No params file given: calibrating the default plant")
    return calibrate(default_targets())


def load_params(path: Optional[str | Path]) -> CompressorParams:
    """Load CompressorParams from a flat JSON file; None returns the calibrated default."""
    if path is None:
        return default_params()
    return _build(CompressorParams, read_flat_config(path), f"params file {path}")


def save_params(params: CompressorParams, path: str | Path) -> Path:
    return write_json(params.model_dump(), path)


def load_targets(path: Optional[str | Path], overrides: Optional[Dict[str, Any]] = None) -> CalibrationTargets:
    """Calibration targets: defaults < targets file < overrides."""
    base = default_targets().model_dump()
    file_values = read_flat_config(path) if path else {}
    return _build(CalibrationTargets, layer(base, file_values, overrides), "calibration targets")


# ====================================================================================================
# 5. CONTROLLER AND METRIC CONFIG
# ----------------------------------------------------------------------------------------------------
def _extract_qp(values: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    """Collect flat 'qp_<field>' keys into the QpConfig field dict (None when absent)."""
    qp = {k[len(QP_KEY_PREFIX):]: v for k, v in values.items() if k.startswith(QP_KEY_PREFIX)}
    return qp or None


def build_ofo_config(values: Dict[str, Any]) -> OfoConfig:
    """OfoConfig from a merged flat dict; unknown non-controller keys are ignored here."""
    fields = {k: values[k] for k in OFO_KEYS if k in values}
    qp_values = _extract_qp(values)
    if qp_values is not None:
        fields["qp"] = _build(QpConfig, qp_values, "QP configuration")
    return _build(OfoConfig, fields, "controller configuration")


def with_gains(cfg: Optional[OfoConfig], nu: float, dt: float) -> OfoConfig:
    """Copy of a controller config with (ν, ΔT) replaced (default bounds when cfg is None)."""
    base = cfg.model_dump() if cfg is not None else {}
    return _build(OfoConfig, {**base, "nu": nu, "dt": dt}, "controller configuration")


def build_metric_config(values: Dict[str, Any]) -> MetricConfig:
    return _build(MetricConfig, {k: values[k] for k in METRIC_KEYS if k in values}, "metric configuration")


def load_run_values(path: Optional[str | Path]) -> Dict[str, Any]:
    """Raw (bar-normalised) values of a --config file, or {} when no file is given."""
    return read_flat_config(path) if path else {}


def ofo_config_to_flat(cfg: OfoConfig) -> Dict[str, Any]:
    """Flatten an OfoConfig back into the config-file key layout."""
    flat = cfg.model_dump(exclude={"qp"})
    if cfg.qp is not None:
        flat.update({f"{QP_KEY_PREFIX}{k}": v for k, v in cfg.qp.model_dump().items()})
    return flat


# ====================================================================================================
# 6. TUNED PARAMETER SETS
# ----------------------------------------------------------------------------------------------------
def load_tuned_sets(path: str | Path, feasible_only: bool = True) -> List[Tuple[str, float, float]]:
    """
    Parameter sets ('beta_<b1>_<b2>', ν, ΔT) read from a tune_summary.csv.

    Raises:
        ConfigError: missing/unreadable file, missing columns or no usable rows.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Tune summary not found: {path}")
    try:
        df = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise ConfigError(f"Tune summary {path} is not a readable CSV: {e}") from e

    missing = [c for c in ("beta1", "beta2", "nu", "dt", "feasible") if c not in df.columns]
    if missing:
        raise ConfigError(f"Tune summary {path} lacks columns {missing}")

    if feasible_only:
        df = df[df["feasible"].astype(str).str.lower() == "true"]
    if df.empty:
        raise ConfigError(f"Tune summary {path} has no {'feasible ' if feasible_only else ''}rows")

    sets = [(f"beta_{row.beta1:g}_{row.beta2:g}", float(row.nu), float(row.dt)) for row in df.itertuples()]
    logger.info(f"Loaded {len(sets)} tuned parameter sets from {path}")
    return sets


# ====================================================================================================
# 7. MAIN EXECUTION (STANDALONE TEST)
# ----------------------------------------------------------------------------------------------------
if __name__ == "__main__":
    cfg = build_ofo_config(layer({"nu": 150.0, "dt": 47.5}, {"u_max": 900.0}))
    print(f"✅ Controller config: {cfg}")
    print(f"✅ Flat form: {ofo_config_to_flat(cfg)}")
