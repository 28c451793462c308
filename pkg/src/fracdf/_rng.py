"""Per-replication random streams.

Replication ``r`` of an experiment identified by ``key`` always draws from
``SeedSequence(seed, spawn_key=(*key, r))``, so results do not depend on how
replications are chunked or scheduled.
"""
from __future__ import annotations

import numpy as np

# stream domains; keep stable, they are part of the reproducibility contract
CALIBRATION = 1
SIZE_POWER = 2
SWEEP = 3
PARTIAL_SUM = 4
SIMULATE = 5
SAMPLES = 6

_REAL_OFFSET = 2**40


def encode_real(x: float) -> int:
    """Map a parameter value (to 1e-6 resolution) to a nonnegative key word."""
    code = int(round(float(x) * 1_000_000)) + _REAL_OFFSET
    if code < 0:
        raise ValueError(f"parameter {x!r} out of range for stream keys")
    return code


def check_seed(seed) -> int:
    if int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    return int(seed)


def replication_generator(seed: int, key: tuple[int, ...], rep: int) -> np.random.Generator:
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(*key, int(rep)))
    return np.random.Generator(np.random.PCG64(ss))


def replication_normals(seed: int, key: tuple[int, ...], start: int, stop: int, n: int) -> np.ndarray:
    """Standard normal draws, one row of length ``n`` per replication in ``[start, stop)``."""
    out = np.empty((stop - start, n))
    for i, rep in enumerate(range(start, stop)):
        out[i] = replication_generator(seed, key, rep).standard_normal(n)
    return out


def gaussian_innovations(n: int, seed: int, sigma: float = 1.0) -> np.ndarray:
    """The i.i.d. N(0, sigma^2) innovations used by ``fracdf simulate``."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return sigma * replication_normals(seed, (SIMULATE,), 0, 1, int(n))[0]
