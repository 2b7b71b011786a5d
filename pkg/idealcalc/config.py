import os
from dataclasses import dataclass
from typing import Final

# Inequality checks: lhs <= rhs + SLACK_TOL
SLACK_TOL: Final = 1e-10
# Equality checks between dense-decomposition results
REL_TOL: Final = 1e-8
# A NormEstimate value must match its witness recomputed to this precision
WITNESS_TOL: Final = 1e-9
# Absolute slack on the derivation sandwich, scaled by max(1, bound)
SANDWICH_TOL: Final = 1e-8

LINEARITY_TOL: Final = 1e-8
LINEARITY_SAMPLES: Final = 8
RECOVERY_SAMPLES: Final = 50

DEFAULT_RESTARTS: Final = 32
DEFAULT_ASCENT_STEPS: Final = 200
DEFAULT_SEED: Final = 0


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    try:
        return max(1, int(raw)) if raw else default
    except ValueError:
        return default


@dataclass
class Settings:
    THREADS: int = _int_env("IDEALCALC_THREADS", 1)
    LOG_LEVEL: str = os.getenv("IDEALCALC_LOG_LEVEL", "WARNING").upper()


settings = Settings()
