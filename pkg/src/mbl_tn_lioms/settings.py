"""Default values and environment overrides."""

import os

from .errors import ArgumentError

DEFAULT_DENSE_LIMIT = 12
DEFAULT_COUPLING_J = 1.0
DEFAULT_ANISOTROPY_DELTA = 1.0
DEFAULT_REALIZATIONS = 100
DEFAULT_DISORDER_LIST = (8.0, 12.0, 16.0, 20.0)
DEFAULT_T_MIN = 1e-1
DEFAULT_T_MAX = 1e6
DEFAULT_T_POINTS = 48

WORKERS_ENV_VAR = "MBL_TN_WORKERS"
DENSE_LIMIT_ENV_VAR = "MBL_TN_DENSE_LIMIT"


def _int_from_env(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise ArgumentError(f"Environment variable {name} must be an integer, got '{raw}'")


def workers_from_env() -> int | None:
    """Worker count override from MBL_TN_WORKERS, if set."""
    return _int_from_env(WORKERS_ENV_VAR)


def dense_limit_from_env() -> int | None:
    """Dense-capacity override from MBL_TN_DENSE_LIMIT, if set."""
    return _int_from_env(DENSE_LIMIT_ENV_VAR)
