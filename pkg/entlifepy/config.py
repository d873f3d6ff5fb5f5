import os
import sys
from pathlib import Path
from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

env_path = BASE_DIR / ".env"
load_dotenv(env_path)

# Dense matrices beyond 10 qubits (1024 x 1024) are never allocated.
ORACLE_HARD_CAP = 10


def _get_bool(env_key: str, default: bool) -> bool:
    val = os.getenv(env_key)
    if val is None:
        return default
    return val.strip().lower() in ("true", "1", "yes")


def _get_int(env_key: str, default: int, minimum: int = 1) -> int:
    val = os.getenv(env_key)
    if val is None or not val.strip():
        return default
    try:
        parsed = int(val)
    except ValueError:
        print(f" WARNING: {env_key}={val!r} is not an integer, using {default}", file=sys.stderr)
        return default
    if parsed < minimum:
        print(f" WARNING: {env_key}={parsed} below {minimum}, using {minimum}", file=sys.stderr)
        return minimum
    return parsed


def _get_log_level(env_key: str, default: str) -> str:
    val = os.getenv(env_key, default).strip().upper()
    if val not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        print(f" WARNING: {env_key}={val!r} is not a log level, using {default}", file=sys.stderr)
        return default
    return val


# --- Logging ---
LOG_LEVEL = _get_log_level("ENTLIFE_LOG_LEVEL", "WARNING")
LOG_TO_FILE = _get_bool("ENTLIFE_LOG_TO_FILE", False)

# --- Scans ---
SCAN_WORKERS = _get_int("ENTLIFE_SCAN_WORKERS", 4)

# --- Oracle ---
ORACLE_MAX_QUBITS = min(_get_int("ENTLIFE_ORACLE_MAX_QUBITS", ORACLE_HARD_CAP, minimum=2), ORACLE_HARD_CAP)
# Largest GHZ / star size the verification suites build (still capped by the oracle).
SUITE_MAX_N = _get_int("ENTLIFE_SUITE_MAX_N", 8, minimum=3)

# --- Output ---
STAMP_RESULTS = _get_bool("ENTLIFE_STAMP_RESULTS", False)
NO_COLOR = os.getenv("NO_COLOR") is not None
