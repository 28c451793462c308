"""
Critical values and the fractional Dickey-Fuller test of ``H0: d >= d0``.

Rejection happens in the left tail, ``Z < c_n(alpha)``. Critical values are
the no-constant Dickey-Fuller quantiles, obtained by simulating random walks
(the least favourable case ``d = d0`` reduces the fractional regression to the
classic one on an I(1) series).
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import partial
import io
import os
from pathlib import Path
from importlib import resources
from typing import Iterable, Mapping

import numpy as np

from . import _rng
from ._parallel import chunk_bounds, map_chunks
from .fracdiff import as_series
from .regress import RegressionFit, df_statistics, fit_fadf, fit_fdf

__all__ = [
    "Calibration",
    "CriticalValueTable",
    "TableCoverageError",
    "TestOutcome",
    "DEFAULT_ALPHA_GRID",
    "DEFAULT_N_GRID",
    "calibrate_critical_values",
    "fdf_test",
    "load_table",
    "lookup_critical",
    "normalize_statistic",
    "read_tables",
    "write_tables",
]

DEFAULT_N_GRID = (25, 50, 100, 250, 500, 1000, 5000)
DEFAULT_ALPHA_GRID = (0.01, 0.025, 0.05, 0.10)
TABLE_ENV_VAR = "FRACDF_TABLE"
CSV_COLUMNS = ("statistic", "n", "alpha", "critical_value", "replications", "seed")

_ALPHA_TOL = 1e-9


class TableCoverageError(ValueError):
    """Requested (n, alpha) is not covered by a critical-value table."""


def normalize_statistic(name: str) -> str:
    key = str(name).strip().upper()
    if key not in ("Z1", "Z2"):
        raise ValueError(f"unknown statistic {name!r}; use 'Z1' or 'Z2'")
    return key


@dataclass(frozen=True)
class Calibration:
    replications: int
    seed: int
    n_grid: tuple[int, ...]
    alpha_grid: tuple[float, ...]


@dataclass(frozen=True)
class CriticalValueTable:
    """
    Left-tail critical points ``c_n(alpha)`` for one statistic.

    Attributes
    ----------
    statistic : {"Z1", "Z2"}
    entries : dict
        Maps ``(n, alpha)`` to the critical value.
    calibration : Calibration
        Replications, seed and grids the table was simulated with.
    """

    statistic: str
    entries: Mapping[tuple[int, float], float]
    calibration: Calibration

    @property
    def n_grid(self) -> tuple[int, ...]:
        return tuple(sorted({n for n, _ in self.entries}))

    @property
    def alpha_grid(self) -> tuple[float, ...]:
        return tuple(sorted({a for _, a in self.entries}))

    def column(self, alpha: float) -> np.ndarray:
        """Critical values for ``alpha`` across ``n_grid``."""
        a = _match_alpha(self, alpha)
        return np.array([self.entries[(n, a)] for n in self.n_grid])


@dataclass(frozen=True)
class TestOutcome:
    """Verdict of one fractional Dickey-Fuller test."""

    __test__ = False  # not a pytest class

    d0: float
    statistic_used: str
    value: float
    critical_value: float
    alpha: float
    reject: bool
    fit: RegressionFit = field(repr=False)


# --- calibration -----------------------------------------------------------


def _random_walk_statistic(statistic: str, seed: int, n: int, start: int, stop: int) -> np.ndarray:
    u = _rng.replication_normals(seed, (_rng.CALIBRATION, n), start, stop, n)
    stats = df_statistics(np.cumsum(u, axis=1))
    return stats.z1 if statistic == "Z1" else stats.z2


def simulate_null_statistic(
    statistic: str, n: int, replications: int, seed: int, workers: int = 1
) -> np.ndarray:
    """Dickey-Fuller statistic for ``replications`` simulated random walks of length ``n``."""
    statistic = normalize_statistic(statistic)
    func = partial(_random_walk_statistic, statistic, _rng.check_seed(seed), int(n))
    parts = map_chunks(func, chunk_bounds(int(replications), int(n)), workers)
    return np.concatenate(parts)


def calibrate_critical_values(
    statistic: str = "Z2",
    n_grid: Iterable[int] = DEFAULT_N_GRID,
    alpha_grid: Iterable[float] = DEFAULT_ALPHA_GRID,
    replications: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> CriticalValueTable:
    """
    Simulate Dickey-Fuller critical values on an ``(n, alpha)`` grid.

    Every replication is a Gaussian random walk with ``x_0 = 0``; the table
    stores empirical ``alpha``-quantiles of the chosen statistic. The result is
    a deterministic function of the arguments (``workers`` excluded).

    Raises
    ------
    ValueError
        On empty grids, ``n < 3``, ``alpha`` outside ``(0, 0.5)`` or when
        ``replications * alpha < 100`` for the smallest ``alpha``.
    """
    statistic = normalize_statistic(statistic)
    n_grid = tuple(sorted({int(n) for n in n_grid}))
    alpha_grid = tuple(sorted({float(a) for a in alpha_grid}))
    if not n_grid or not alpha_grid:
        raise ValueError("n_grid and alpha_grid must be nonempty")
    if n_grid[0] < 3:
        raise ValueError("sample sizes must be at least 3")
    if not all(0.0 < a < 0.5 for a in alpha_grid):
        raise ValueError("alpha values must lie in (0, 0.5)")
    replications = int(replications)
    if replications * alpha_grid[0] < 100:
        raise ValueError(
            f"{replications} replications are too few for alpha={alpha_grid[0]}; "
            "need replications * alpha >= 100"
        )
    seed = _rng.check_seed(seed)
    entries = {}
    for n in n_grid:
        sample = simulate_null_statistic(statistic, n, replications, seed, workers)
        for a, c in zip(alpha_grid, np.quantile(sample, alpha_grid)):
            entries[(n, a)] = float(c)
    return CriticalValueTable(
        statistic=statistic,
        entries=entries,
        calibration=Calibration(replications, seed, n_grid, alpha_grid),
    )


# --- lookup and test -------------------------------------------------------


def _match_alpha(table: CriticalValueTable, alpha: float) -> float:
    for a in table.alpha_grid:
        if abs(a - alpha) <= _ALPHA_TOL:
            return a
    raise TableCoverageError(
        f"alpha={alpha} is not in the {table.statistic} table grid {table.alpha_grid}"
    )


def lookup_critical(table: CriticalValueTable, n: int, alpha: float) -> float:
    """
    Critical value for sample size ``n`` at level ``alpha``.

    Grid hits are returned as stored. Between grid points the value is
    interpolated linearly in ``1/n``; above the largest grid size the
    largest-``n`` entry is used as the asymptotic value. Sizes below the grid
    raise :class:`TableCoverageError`.
    """
    a = _match_alpha(table, alpha)
    grid = table.n_grid
    if n in grid:
        return table.entries[(n, a)]
    if n > grid[-1]:
        return table.entries[(grid[-1], a)]
    if n < grid[0]:
        raise TableCoverageError(
            f"n={n} is below the smallest tabulated sample size {grid[0]}"
        )
    hi = next(g for g in grid if g > n)
    lo = max(g for g in grid if g < n)
    w = (1.0 / n - 1.0 / hi) / (1.0 / lo - 1.0 / hi)
    return w * table.entries[(lo, a)] + (1.0 - w) * table.entries[(hi, a)]


def fdf_test(
    y,
    d0: float = 1.0,
    alpha: float = 0.05,
    statistic: str = "Z2",
    table: CriticalValueTable | None = None,
    p: int = 0,
) -> TestOutcome:
    """
    Test ``H0: d >= d0`` against ``H1: d < d0``.

    Fits the fractional Dickey-Fuller regression (augmented with ``p`` lags
    when ``p > 0``) and rejects when the statistic falls strictly below the
    critical value. ``d0 = 1`` is the classic Dickey-Fuller unit-root test.

    Parameters
    ----------
    y : array_like
        Observed series.
    d0 : float
        Integration order under the null.
    alpha : float
        Level, must be on the table's alpha grid.
    statistic : {"Z2", "Z1"}
        ``Z2`` is the t-ratio, ``Z1`` is ``n * rho_hat``.
    table : CriticalValueTable, optional
        Defaults to the bundled table (or ``$FRACDF_TABLE``).
    p : int
        Number of lagged fractional differences.

    Returns
    -------
    TestOutcome
    """
    statistic = normalize_statistic(statistic)
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 0.5), got {alpha}")
    if table is None:
        table = load_table(statistic)
    elif table.statistic != statistic:
        raise ValueError(
            f"table holds {table.statistic} critical values, not {statistic}"
        )
    y = as_series(y, min_length=3, name="y")
    fit = fit_fadf(y, d0, p) if p > 0 else fit_fdf(y, d0)
    value = fit.statistic(statistic)
    crit = lookup_critical(table, fit.n, alpha)
    return TestOutcome(
        d0=float(d0),
        statistic_used=statistic,
        value=value,
        critical_value=crit,
        alpha=float(alpha),
        reject=bool(value < crit),
        fit=fit,
    )


# --- serialization ---------------------------------------------------------


def write_tables(tables: Iterable[CriticalValueTable], path=None) -> str | None:
    """
    Write one or more tables as CSV.

    Columns: statistic, n, alpha, critical_value, replications, seed. Floats
    are written with ``repr`` so they read back exactly. Returns the CSV text
    when ``path`` is None.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for table in tables:
        cal = table.calibration
        for (n, a) in sorted(table.entries):
            writer.writerow(
                [table.statistic, n, repr(float(a)), repr(float(table.entries[(n, a)])),
                 cal.replications, cal.seed]
            )
    text = buf.getvalue()
    if path is None:
        return text
    Path(path).write_text(text)
    return None


def read_tables(source) -> dict[str, CriticalValueTable]:
    """Read a critical-value CSV (path or text stream) into tables keyed by statistic."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    reader = csv.DictReader(io.StringIO(text))
    missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise ValueError(f"critical-value CSV lacks columns {sorted(missing)}")
    rows: dict[str, list[dict]] = {}
    for row in reader:
        rows.setdefault(normalize_statistic(row["statistic"]), []).append(row)
    tables = {}
    for stat, group in rows.items():
        entries = {(int(r["n"]), float(r["alpha"])): float(r["critical_value"]) for r in group}
        reps = {int(r["replications"]) for r in group}
        seeds = {int(r["seed"]) for r in group}
        if len(reps) != 1 or len(seeds) != 1:
            raise ValueError(f"{stat} rows mix calibration runs")
        tables[stat] = CriticalValueTable(
            statistic=stat,
            entries=entries,
            calibration=Calibration(
                replications=reps.pop(),
                seed=seeds.pop(),
                n_grid=tuple(sorted({n for n, _ in entries})),
                alpha_grid=tuple(sorted({a for _, a in entries})),
            ),
        )
    return tables


_BUNDLED: dict[str, CriticalValueTable] = {}


def load_table(statistic: str = "Z2", path=None) -> CriticalValueTable:
    """
    Load a critical-value table.

    Resolution order: ``path``, then the ``FRACDF_TABLE`` environment
    variable, then the table bundled with the package.
    """
    statistic = normalize_statistic(statistic)
    path = path or os.environ.get(TABLE_ENV_VAR)
    if path:
        tables = read_tables(path)
    else:
        if not _BUNDLED:
            ref = resources.files("fracdf") / "data" / "critical_values.csv"
            with ref.open("r") as fh:
                _BUNDLED.update(read_tables(fh))
        tables = _BUNDLED
    if statistic not in tables:
        raise TableCoverageError(f"table has no {statistic} critical values")
    return tables[statistic]
