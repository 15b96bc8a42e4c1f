# ====================================================================================================
# P03_shared_functions.py
# ----------------------------------------------------------------------------------------------------
# Provides common reusable helper functions used across multiple project modules.
#
# Purpose:
#   - Centralise unit conversion at the I/O boundary (bar <-> Pa).
#   - Read flat key-value config files, resolving the "_bar" key suffix into Pa.
#   - Write CSV / JSON / aligned-text artifacts deterministically (byte-identical on rerun).
#
# Usage:
#   from processes.P03_shared_functions import <function_name>
#
# Example:
#   >>> from processes.P03_shared_functions import bar_to_pa
#   >>> bar_to_pa(1.015)
#   101500.0
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
from processes.P06_class_items import ConfigError

logger = logging.getLogger(__name__)

PA_PER_BAR = 1e5
BAR_SUFFIX = "_bar"
CSV_FLOAT_FORMAT = "%.12g"


# ====================================================================================================
# 3. UNIT CONVERSION
# ----------------------------------------------------------------------------------------------------
def bar_to_pa(value):
    """Convert bar to Pa (scalars or numpy arrays)."""
    return value * PA_PER_BAR


def pa_to_bar(value):
    """Convert Pa to bar (scalars or numpy arrays)."""
    return value / PA_PER_BAR


# ====================================================================================================
# 4. FLAT CONFIG FILES
# ----------------------------------------------------------------------------------------------------
def normalise_bar_keys(raw: Dict[str, Any]) -> Dict[str, Any]:
    """
    Resolve '<name>_bar' keys into '<name>' in Pa.

    Supplying both '<name>' and '<name>_bar' is ambiguous and rejected.
    """
    out: Dict[str, Any] = {}
    for key, value in raw.items():
        if key.endswith(BAR_SUFFIX):
            base = key[: -len(BAR_SUFFIX)]
            if base in raw:
                raise ConfigError(f"Key '{base}' given both in Pa and as '{key}'.")
            try:
                out[base] = bar_to_pa(float(value))
            except (TypeError, ValueError) as e:
                raise ConfigError(f"Key '{key}' must be numeric, got {value!r}") from e
        else:
            out[key] = value
    return out


def read_flat_config(path: str | Path) -> Dict[str, Any]:
    """
    Read a flat JSON object from disk and normalise '_bar' keys.

    Raises:
        ConfigError: missing file, invalid JSON, nested objects, or a non-object root.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e

    if not isinstance(raw, dict):
        raise ConfigError(f"Config file {path} must contain a single key-value object.")
    nested = [k for k, v in raw.items() if isinstance(v, dict)]
    if nested:
        raise ConfigError(f"Config file {path} must be flat; nested keys: {nested}")
    return normalise_bar_keys(raw)


def validation_message(error: ValidationError) -> str:
    """Compact one-line summary of a pydantic ValidationError."""
    parts = []
    for err in error.errors():
        loc = ".".join(str(x) for x in err.get("loc", ())) or "<model>"
        parts.append(f"{loc}: {err.get('msg', 'invalid')}")
    return "; ".join(parts)


# ====================================================================================================
# 5. ARTIFACT WRITERS
# ----------------------------------------------------------------------------------------------------
def _json_safe(value):
    """Replace non-finite floats by None and numpy scalars by Python types (strict JSON)."""
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(data: Dict[str, Any], path: str | Path) -> Path:
    """Write a JSON document with a stable layout (no timestamps, fixed indent)."""
    path = Path(path)
    path.write_text(json.dumps(_json_safe(data), indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def write_csv(df: pd.DataFrame, path: str | Path) -> Path:
    """Write a DataFrame as CSV with 12 significant digits and 'nan' for missing cells."""
    path = Path(path)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    logger.info(f"Wrote {path}")
    return path


def format_aligned_table(df: pd.DataFrame, float_digits: int = 4) -> str:
    """Plain-text, column-aligned rendering of a table for eyeballing against reference tables."""
    def _fmt(v):
        if isinstance(v, (float, np.floating)):
            return "nan" if not math.isfinite(v) else f"{v:.{float_digits}g}"
        return str(v)

    cells = [[str(c) for c in df.columns]] + [[_fmt(v) for v in row] for row in df.itertuples(index=False)]
    widths = [max(len(r[i]) for r in cells) for i in range(len(df.columns))]
    lines = ["  ".join(r[i].rjust(widths[i]) for i in range(len(widths))) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def write_text(text: str, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
