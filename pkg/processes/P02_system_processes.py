# ====================================================================================================
# P02_system_processes.py
# ----------------------------------------------------------------------------------------------------
# Provides worker-count resolution and an ordered concurrent fan-out helper.
#
# Purpose:
#   - Turn a --jobs request (None / 0 / N) into a concrete thread count for this machine.
#   - Run independent closed-loop simulations concurrently while returning results in input order,
#     so downstream artifacts do not depend on thread scheduling.
#
# Usage:
#   from processes.P02_system_processes import resolve_jobs, run_ordered
#
# Example:
#   >>> run_ordered(lambda x: x * x, [1, 2, 3], jobs=2)
#   [1, 4, 9]
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


# ====================================================================================================
# 3. WORKER COUNT
# ----------------------------------------------------------------------------------------------------
def resolve_jobs(jobs: Optional[int]) -> int:
    """
    Resolve a requested worker count.

    Parameters:
        jobs (int | None): None or 0 means "one per CPU"; a positive value is used as-is.

    Returns:
        int: Number of worker threads (always ≥ 1).

    Raises:
        ConfigError: Negative worker counts.
    """
    if jobs is None or jobs == 0:
        return max(os.cpu_count() or 1, 1)
    if jobs < 0:
        raise ConfigError(f"--jobs must be >= 0, got {jobs}")
    return int(jobs)


# ====================================================================================================
# 4. ORDERED FAN-OUT
# ----------------------------------------------------------------------------------------------------
def run_ordered(fn: Callable[[Any], Any], items: Sequence[Any], jobs: Optional[int] = 1) -> List[Any]:
    """
    Apply `fn` to every item, possibly concurrently, and return results in input order.

    jobs=1 (or a single item) runs inline on the calling thread. Exceptions raised by `fn`
    propagate to the caller from the first failing item in input order.
    """
    items = list(items)
    workers = min(resolve_jobs(jobs), len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]

    logger.debug(f"Fanning out {len(items)} tasks over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="ofo-worker") as pool:
        return list(pool.map(fn, items))


# ====================================================================================================
# 5. MAIN EXECUTION (STANDALONE TEST)
# ----------------------------------------------------------------------------------------------------
if __name__ == "__main__":
    print(f"🧵 Workers available: {resolve_jobs(None)}")
    print(f"✅ Ordered squares: {run_ordered(lambda x: x * x, range(8), jobs=4)}")
