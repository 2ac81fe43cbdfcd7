"""Versioned defaults for sweeps and validation grids.

Changing any grid changes which random draws the validators make, so bump
``GRID_VERSION`` whenever a value here is edited.
"""
from __future__ import annotations

GRID_VERSION = 1

#: Largest N (as log2) used in default sweeps, per l.
MAX_LOG2_N = {2: 22, 3: 22, 4: 20}

#: Tolerance on the fitted query exponent, per l.
FIT_TOLERANCE = {2: 0.05, 3: 0.07, 4: 0.10}

#: Bytes of function tables a sweep may hold at once.
MEMORY_BUDGET = 2 * 1024**3

#: Environment variable naming the number of worker processes.
WORKERS_ENV = "QMCLAW_WORKERS"

#: Multiples of binomial standard error granted to Monte-Carlo rate checks.
MC_SIGMAS = 2.0

GROVER_GRID = {
    "sizes": (2, 3, 4, 5, 7, 8, 13, 16, 31, 64, 100, 127, 256, 500, 512, 777, 1000, 1024),
    "fractions": (1 / 1024, 0.01, 0.05, 0.125, 0.2, 0.25, 0.5, 0.9, 1.0),
    "seed": 20181,
}

#: (n, t) pairs with t/n < 17/81 for the BBHT expectation check.
BBHT_GRID = (
    (20, 4),
    (81, 16),
    (100, 20),
    (1000, 1),
    (1000, 90),
    (1000, 200),
    (4096, 1),
    (4096, 16),
    (4096, 800),
    (65536, 64),
    (10**6, 1000),
)
BBHT_TRIALS = 10_000

LEMMA_IMAGE = {"domain": 4096, "range": 4096, "seeds": 1000, "seed": 44}

#: (population, drawn, defectives) for the hypergeometric tail check.
HYPERGEOM_GRID = (
    (10_000, 3_333, 400),
    (10_000, 3_333, 0),
    (4_096, 1_366, 256),
    (16_384, 5_462, 1_024),
    (2_000, 1_000, 1_000),
    (50_000, 16_667, 160),
)
HYPERGEOM_TRIALS = 10_000

#: (l, N, c_N, k, level, trials) for the good-event check.
GOOD_EVENT_GRID = (
    (2, 2**14, 1.0, 4, 1, 200),
    (2, 2**14, 1.0, 4, 2, 200),
    (3, 2**14, 1.0, 4, 2, 200),
    (3, 2**14, 1.0, 4, 3, 200),
)
