"""
Runtime settings for dipcheck
Reads defaults from the environment (and an optional .env file)
"""

import os
from typing import Tuple

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _parse_eps_grid(raw: str) -> Tuple[float, ...]:
    values = tuple(float(part) for part in raw.split(",") if part.strip())
    if not values or any(v <= 0 for v in values):
        raise ValueError(f"DIPCHECK_EPS_GRID must list positive numbers, got {raw!r}")
    return values


# Sampling
DEFAULT_SEED = int(os.getenv("DIPCHECK_SEED", "0"))
DEFAULT_MC_SAMPLES = int(os.getenv("DIPCHECK_MC_SAMPLES", "1000000"))
MC_WORKERS = int(os.getenv("DIPCHECK_MC_WORKERS", "1"))
MC_CHUNK_SIZE = 65536

# Refutation search
DEFAULT_EPS_GRID = _parse_eps_grid(os.getenv("DIPCHECK_EPS_GRID", "1,2,4,8"))
DEFAULT_ELL_MAX = 64
MC_CONFIRMATION_SIGMAS = 4.0
RARE_EVENT_HITS = 10

# Numerics
ADJACENCY_TOLERANCE = 1e-9
RATE_MERGE_DIGITS = 12
NEGLIGIBLE_TAIL_RATIO = 1e-12
PROBABILITY_TOLERANCE = 1e-9

# Report format
SCHEMA_VERSION = "1"
