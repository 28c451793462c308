"""
Monte Carlo experiments for the fractional Dickey-Fuller test.

Size/power tables, phi-hat sweeps over the integration order, kernel density
estimates of null distributions and Kolmogorov-Smirnov comparisons between
simulated statistic distributions.

Every replication draws its Gaussian innovations from a stream keyed by
``(seed, experiment, cell, replication)``; reports are therefore identical
for any number of worker processes.
"""
from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, field
from functools import partial
import io
import json
import math
from pathlib import Path
import time
from importlib import resources
from typing import Iterable, Sequence

import numpy as np
from scipy import stats as sp_stats
import yaml

from . import _rng
from ._parallel import chunk_bounds, map_chunks
from .fdftest import CriticalValueTable, load_table, lookup_critical, normalize_statistic
from .fracdiff import as_series, frac_diff, generate_fi
from .regress import DFStatistics, DegenerateRegressionError, df_statistics, fit_fadf, fit_fdf

__all__ = [
    "ConfigError",
    "DensityGrid",
    "McCell",
    "McConfig",
    "McReport",
    "distribution_equivalence",
    "kernel_density",
    "ks_distance",
    "load_mc_config",
    "read_density_csv",
    "read_report_csv",
    "run_phi_sweep",
    "run_size_power",
    "simulate_statistics",
    "write_density_csv",
    "write_report_csv",
    "write_report_json",
]

REPORT_COLUMNS = ("d_true", "d0", "delta", "n", "alpha", "statistic", "frequency", "kind")


# --- simulation core -------------------------------------------------------


def _cell_key(stream: int, d_true: float, d0: float, n: int) -> tuple[int, ...]:
    return (stream, _rng.encode_real(d_true), _rng.encode_real(d0), int(n))


def _fdf_chunk(d_true, d0, n, seed, sigma, lags, stream, start, stop):
    u = _rng.replication_normals(seed, _cell_key(stream, d_true, d0, n), start, stop, n)
    y = generate_fi(d_true, sigma * u)
    if lags == 0:
        return df_statistics(frac_diff(y, d0 - 1.0))
    rows = []
    for series in y:
        try:
            fit = fit_fadf(series, d0, lags)
            rows.append((fit.rho_hat, fit.s2, fit.z1, fit.z2))
        except DegenerateRegressionError:
            rows.append((np.nan,) * 4)
    arr = np.array(rows).reshape(-1, 4)
    return DFStatistics(*(arr[:, i] for i in range(4)))


def simulate_statistics(
    d_true: float,
    d0: float,
    n: int,
    replications: int,
    seed: int,
    lags: int = 0,
    sigma: float = 1.0,
    workers: int = 1,
    stream: int = _rng.SIZE_POWER,
) -> DFStatistics:
    """
    Fractional Dickey-Fuller quantities for simulated FI(d_true) samples.

    Each replication integrates Gaussian innovations to order ``d_true``
    (zero pre-sample) and fits the fractional regression for ``d0``.

    Returns
    -------
    DFStatistics
        Arrays ``rho_hat``, ``s2``, ``z1``, ``z2`` of length ``replications``.
    """
    n = int(n)
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if int(replications) < 1:
        raise ValueError("replications must be positive")
    func = partial(
        _fdf_chunk, float(d_true), float(d0), n, _rng.check_seed(seed),
        float(sigma), int(lags), int(stream),
    )
    parts = map_chunks(func, chunk_bounds(int(replications), n), workers)
    return DFStatistics(*(np.concatenate([p[i] for p in parts]) for i in range(4)))


# --- size and power --------------------------------------------------------


@dataclass(frozen=True)
class McConfig:
    """
    One size/power experiment: a true order and a set of null orders.

    Attributes
    ----------
    d_true : float
        Integration order of the simulated data.
    d0_grid : tuple of float
        Null orders tested on every replication.
    n : int
        Sample size.
    replications : int
    alpha_grid : tuple of float
        Levels, each in ``(0, 0.5)``.
    seed : int
    statistic : {"Z2", "Z1"}
    lags : int
        Augmentation lags of the regression.
    sigma : float
        Innovation standard deviation.
    """

    d_true: float
    d0_grid: tuple[float, ...]
    n: int
    replications: int
    alpha_grid: tuple[float, ...] = (0.01, 0.05, 0.10)
    seed: int = 0
    statistic: str = "Z2"
    lags: int = 0
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "d0_grid", tuple(float(d) for d in self.d0_grid))
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        object.__setattr__(self, "statistic", normalize_statistic(self.statistic))
        if not self.d0_grid:
            raise ValueError("d0_grid must be nonempty")
        if not all(0.0 < a < 0.5 for a in self.alpha_grid) or not self.alpha_grid:
            raise ValueError("alpha values must lie in (0, 0.5)")
        if int(self.replications) < 1:
            raise ValueError("replications must be at least 1")
        if int(self.n) < 3:
            raise ValueError("n must be at least 3")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        _rng.check_seed(self.seed)


@dataclass(frozen=True)
class McCell:
    """
    One (d_true, d0, alpha) cell of a size/power table.

    ``kind`` is ``"size"`` when ``d_true >= d0`` and ``frequency`` is then the
    non-rejection frequency, following the layout of published size tables;
    for ``"power"`` cells it is the rejection frequency.
    """

    d_true: float
    d0: float
    delta: float
    n: int
    alpha: float
    statistic: str
    frequency: float
    kind: str
    rejections: int = -1
    replications: int = -1


@dataclass
class McReport:
    config: McConfig
    cells: list[McCell]
    wall_time: float = 0.0
    samples: dict[float, np.ndarray] = field(default_factory=dict)

    def cell(self, d0: float, alpha: float) -> McCell:
        for c in self.cells:
            if abs(c.d0 - d0) < 1e-9 and abs(c.alpha - alpha) < 1e-9:
                return c
        raise KeyError((d0, alpha))

    def rejection_rate(self, d0: float, alpha: float) -> float:
        """Rejection frequency irrespective of the cell's table convention."""
        c = self.cell(d0, alpha)
        return c.frequency if c.kind == "power" else 1.0 - c.frequency


def _delta(d_true: float, d0: float) -> float:
    return round(d_true - d0, 10)


def run_size_power(
    config: McConfig,
    table: CriticalValueTable | None = None,
    keep_samples: bool = False,
    workers: int = 1,
) -> McReport:
    """
    Simulate rejection frequencies of the fractional Dickey-Fuller test.

    The same replications serve every alpha of a ``(d_true, d0)`` pair; each
    pair has its own random stream.

    Parameters
    ----------
    config : McConfig
    table : CriticalValueTable, optional
        Defaults to the bundled table for ``config.statistic``.
    keep_samples : bool
        Store the statistic vector of each ``d0`` in ``report.samples``.
    workers : int
        Worker processes; does not affect results.
    """
    started = time.perf_counter()
    table = table if table is not None else load_table(config.statistic)
    if table.statistic != config.statistic:
        raise ValueError(f"table holds {table.statistic}, config asks for {config.statistic}")
    n_eff = config.n - config.lags
    crit = {a: lookup_critical(table, n_eff, a) for a in config.alpha_grid}
    cells, samples = [], {}
    for d0 in config.d0_grid:
        res = simulate_statistics(
            config.d_true, d0, config.n, config.replications, config.seed,
            lags=config.lags, sigma=config.sigma, workers=workers,
        )
        values = res.z2 if config.statistic == "Z2" else res.z1
        if keep_samples:
            samples[d0] = values
        delta = _delta(config.d_true, d0)
        kind = "size" if delta >= 0 else "power"
        for a in config.alpha_grid:
            rejections = int(np.count_nonzero(values < crit[a]))
            rate = rejections / config.replications
            cells.append(
                McCell(
                    d_true=config.d_true, d0=d0, delta=delta, n=config.n, alpha=a,
                    statistic=config.statistic,
                    frequency=rate if kind == "power" else 1.0 - rate,
                    kind=kind, rejections=rejections, replications=config.replications,
                )
            )
    return McReport(config, cells, time.perf_counter() - started, samples)


def write_report_csv(reports: Iterable[McReport], path=None) -> str | None:
    """One row per cell; returns the text when ``path`` is None."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for report in reports:
        for c in report.cells:
            writer.writerow([repr(float(c.d_true)), repr(float(c.d0)), repr(float(c.delta)), c.n,
                             repr(float(c.alpha)), c.statistic, repr(float(c.frequency)), c.kind])
    text = buf.getvalue()
    if path is None:
        return text
    Path(path).write_text(text)
    return None


def read_report_csv(source) -> list[McCell]:
    text = source.read() if hasattr(source, "read") else Path(source).read_text()
    cells = []
    for row in csv.DictReader(io.StringIO(text)):
        cells.append(
            McCell(
                d_true=float(row["d_true"]), d0=float(row["d0"]),
                delta=float(row["delta"]), n=int(row["n"]), alpha=float(row["alpha"]),
                statistic=row["statistic"], frequency=float(row["frequency"]),
                kind=row["kind"],
            )
        )
    return cells


def write_report_json(reports: Iterable[McReport], path=None, include_samples: bool = False):
    """Full metadata, cells and (optionally) raw statistic samples as JSON."""
    payload = []
    for r in reports:
        entry = {
            "config": asdict(r.config),
            "wall_time": r.wall_time,
            "cells": [asdict(c) for c in r.cells],
        }
        if include_samples and r.samples:
            entry["samples"] = {repr(float(k)): v.tolist() for k, v in r.samples.items()}
        payload.append(entry)
    text = json.dumps({"reports": payload}, indent=1)
    if path is None:
        return text
    Path(path).write_text(text)
    return None


# --- experiment configuration files ----------------------------------------


class ConfigError(ValueError):
    """Invalid experiment configuration; ``errors`` lists every problem found."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid experiment configuration:\n  " + "\n  ".join(self.errors))


_TOP_KEYS = {"name", "seed", "replications", "statistic", "alpha_grid", "lags", "sigma", "experiments"}
_EXP_KEYS = {"d_true", "n", "d0_grid", "replications", "alpha_grid", "seed", "statistic", "lags", "sigma"}


def _node_value(node):
    return yaml.safe_load(yaml.serialize(node))


def _line(node) -> str:
    return f"line {node.start_mark.line + 1}"


def _check_number(node, errors, what, integer=False, positive=False, nonneg=False):
    value = _node_value(node)
    kinds = (int,) if integer else (int, float)
    if isinstance(value, bool) or not isinstance(value, kinds):
        errors.append(f"{_line(node)}: {what} must be {'an integer' if integer else 'a number'}, got {value!r}")
        return None
    if positive and not value > 0:
        errors.append(f"{_line(node)}: {what} must be positive, got {value!r}")
        return None
    if nonneg and value < 0:
        errors.append(f"{_line(node)}: {what} must be nonnegative, got {value!r}")
        return None
    return value


def _check_field(key, node, errors):
    if key in ("seed", "lags"):
        return _check_number(node, errors, key, integer=True, nonneg=True)
    if key == "replications":
        return _check_number(node, errors, key, integer=True, positive=True)
    if key == "sigma":
        return _check_number(node, errors, key, positive=True)
    if key == "d_true":
        return _check_number(node, errors, key)
    if key == "statistic":
        value = _node_value(node)
        if str(value).upper() not in ("Z1", "Z2"):
            errors.append(f"{_line(node)}: statistic must be Z1 or Z2, got {value!r}")
            return None
        return str(value).upper()
    if key in ("alpha_grid", "d0_grid", "n"):
        seq = node.value if isinstance(node, yaml.SequenceNode) else [node]
        if key != "n" and not isinstance(node, yaml.SequenceNode):
            errors.append(f"{_line(node)}: {key} must be a list")
            return None
        if not seq:
            errors.append(f"{_line(node)}: {key} must be nonempty")
            return None
        out = []
        for item in seq:
            if key == "n":
                v = _check_number(item, errors, "n", integer=True)
                if v is not None and v < 3:
                    errors.append(f"{_line(item)}: n must be at least 3, got {v}")
                    v = None
            else:
                v = _check_number(item, errors, key)
                if key == "alpha_grid" and v is not None and not 0 < v < 0.5:
                    errors.append(f"{_line(item)}: alpha must lie in (0, 0.5), got {v}")
                    v = None
            out.append(v)
        return None if None in out else out
    if key == "name":
        return _node_value(node)
    return None


def _mapping(node, allowed, errors, where):
    if not isinstance(node, yaml.MappingNode):
        errors.append(f"{_line(node)}: {where} must be a mapping")
        return {}
    out = {}
    for knode, vnode in node.value:
        key = knode.value
        if key not in allowed:
            errors.append(f"{_line(knode)}: unknown key {key!r} in {where}")
            continue
        out[key] = (vnode, _check_field(key, vnode, errors) if key != "experiments" else None)
    return out


def parse_mc_config(text: str) -> list[McConfig]:
    """
    Parse a YAML (or JSON) experiment file into a list of :class:`McConfig`.

    Top-level keys give defaults (``seed``, ``replications``, ``statistic``,
    ``alpha_grid``, ``lags``, ``sigma``); each entry of ``experiments`` needs
    ``d_true``, ``n`` (integer or list) and ``d0_grid`` and may override any
    default. All schema problems are collected and raised together with
    their line numbers.
    """
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"not valid YAML/JSON: {exc}"]) from None
    if root is None:
        raise ConfigError(["configuration is empty"])
    errors: list[str] = []
    top = _mapping(root, _TOP_KEYS, errors, "configuration")
    if "experiments" not in top:
        if isinstance(root, yaml.MappingNode):
            errors.append(f"{_line(root)}: missing required key 'experiments'")
        raise ConfigError(errors)
    exp_node = top["experiments"][0]
    if not isinstance(exp_node, yaml.SequenceNode) or not exp_node.value:
        raise ConfigError(errors + [f"{_line(exp_node)}: experiments must be a nonempty list"])
    defaults = {k: v for k, (_, v) in top.items() if k not in ("experiments", "name")}
    configs = []
    for i, enode in enumerate(exp_node.value):
        entry = _mapping(enode, _EXP_KEYS, errors, f"experiment {i + 1}")
        for req in ("d_true", "n", "d0_grid"):
            if req not in entry and isinstance(enode, yaml.MappingNode):
                errors.append(f"{_line(enode)}: experiment {i + 1} lacks required key {req!r}")
        merged = dict(defaults)
        merged.update({k: v for k, (_, v) in entry.items()})
        if "replications" not in merged and isinstance(enode, yaml.MappingNode):
            errors.append(f"{_line(enode)}: experiment {i + 1} has no replications (set it here or at top level)")
        if any(merged.get(k) is None for k in ("d_true", "n", "d0_grid", "replications")):
            continue
        if any(v is None for v in merged.values()):
            continue
        for n in merged.pop("n"):
            configs.append(
                McConfig(
                    d_true=float(merged["d_true"]),
                    d0_grid=tuple(merged["d0_grid"]),
                    n=int(n),
                    replications=int(merged["replications"]),
                    alpha_grid=tuple(merged.get("alpha_grid", (0.01, 0.05, 0.10))),
                    seed=int(merged.get("seed", 0)),
                    statistic=merged.get("statistic", "Z2"),
                    lags=int(merged.get("lags", 0)),
                    sigma=float(merged.get("sigma", 1.0)),
                )
            )
    if errors:
        raise ConfigError(errors)
    return configs


BUNDLED_CONFIGS = ("tables_1_4",)


def load_mc_config(source: str | Path) -> list[McConfig]:
    """Load an experiment file by path, or a bundled configuration by name."""
    if str(source) in BUNDLED_CONFIGS:
        ref = resources.files("fracdf") / "data" / f"{source}.yaml"
        return parse_mc_config(ref.read_text())
    return parse_mc_config(Path(source).read_text())


# --- phi-hat sweep ---------------------------------------------------------


def run_phi_sweep(
    d_min: float,
    d_max: float,
    step: float,
    d0: float,
    n: int,
    seed: int,
    order_shift: float = 0.0,
) -> list[tuple[float, float]]:
    """
    Estimated AR coefficient ``phi_hat`` of the fractional regression over a
    grid of integration orders, on one fixed innovation path.

    For each grid value ``d`` the series ``generate_fi(d + order_shift, u)`` is
    fitted with null order ``d0``. ``phi_hat`` settles at 1 for ``d >= d0``
    and falls below 1 for ``d < d0``.

    Returns
    -------
    list of (d, phi_hat)
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if n < 100:
        raise ValueError(f"n must be at least 100, got {n}")
    if d_max < d_min:
        raise ValueError("empty grid: d_max < d_min")
    count = int(math.floor((d_max - d_min) / step + 1e-9)) + 1
    grid = np.round(d_min + step * np.arange(count), 10)
    u = _rng.replication_normals(seed, (_rng.SWEEP, int(n)), 0, 1, int(n))[0]
    out = []
    for d in grid:
        fit = fit_fdf(generate_fi(d + order_shift, u), d0)
        out.append((float(d), fit.phi_hat))
    return out


# --- densities and distribution comparisons --------------------------------


@dataclass(frozen=True)
class DensityGrid:
    """Kernel density estimate evaluated on an equispaced grid."""

    xs: np.ndarray
    ys: np.ndarray
    bandwidth: float
    sample_size: int
    kernel: str = "gaussian"
    bandwidth_rule: str = "silverman"

    def integral(self) -> float:
        return float(np.trapezoid(self.ys, self.xs))

    def __call__(self, x) -> np.ndarray:
        """Linear interpolation of the density, zero outside the grid."""
        return np.interp(x, self.xs, self.ys, left=0.0, right=0.0)


def silverman_bandwidth(samples: np.ndarray) -> float:
    """``0.9 * min(sd, IQR / 1.34) * m**(-1/5)``; falls back to sd when IQR is 0."""
    sd = float(np.std(samples, ddof=1))
    q75, q25 = np.percentile(samples, [75, 25])
    spread = min(sd, (q75 - q25) / 1.34) if q75 > q25 else sd
    return 0.9 * spread * len(samples) ** -0.2


def kernel_density(samples, grid_size: int = 512) -> DensityGrid:
    """
    Gaussian kernel density estimate with Silverman's rule-of-thumb bandwidth.

    The grid spans ``[min - 3h, max + 3h]`` with ``grid_size`` points.

    Raises
    ------
    ValueError
        Fewer than 30 samples, non-finite values or zero spread.
    """
    x = as_series(samples, min_length=30, name="samples").ravel()
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    h = silverman_bandwidth(x)
    if not h > 0:
        raise ValueError("samples have zero spread")
    xs = np.linspace(x.min() - 3 * h, x.max() + 3 * h, int(grid_size))
    ys = np.zeros_like(xs)
    norm = 1.0 / (len(x) * h * math.sqrt(2 * math.pi))
    # chunk over the sample to bound the (grid x sample) temporary
    for lo in range(0, len(x), 4096):
        z = (xs[:, None] - x[None, lo : lo + 4096]) / h
        ys += np.exp(-0.5 * z * z).sum(axis=1)
    return DensityGrid(xs=xs, ys=ys * norm, bandwidth=h, sample_size=len(x))


def write_density_csv(grid: DensityGrid, path=None) -> str | None:
    buf = io.StringIO()
    buf.write("x,density\n")
    for x, y in zip(grid.xs, grid.ys):
        buf.write(f"{float(x)!r},{float(y)!r}\n")
    text = buf.getvalue()
    if path is None:
        return text
    Path(path).write_text(text)
    return None


def read_density_csv(source) -> tuple[np.ndarray, np.ndarray]:
    text = source.read() if hasattr(source, "read") else Path(source).read_text()
    rows = list(csv.DictReader(io.StringIO(text)))
    return (np.array([float(r["x"]) for r in rows]),
            np.array([float(r["density"]) for r in rows]))


def ks_distance(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic ``sup |F_a - F_b|``."""
    return float(sp_stats.ks_2samp(np.asarray(a), np.asarray(b)).statistic)


def distribution_equivalence(
    d_values: Sequence[float],
    d0_offsets: Sequence[float],
    n: int,
    replications: int,
    seed: int,
    statistic: str = "Z2",
    workers: int = 1,
) -> dict[float, np.ndarray]:
    """
    Pairwise KS distances between statistic distributions at equal ``d - d0``.

    For every offset ``k`` in ``d0_offsets`` the configurations
    ``(d, d0 = d + k)`` for ``d`` in ``d_values`` share ``delta = -k``. The
    result maps each offset to a symmetric ``len(d_values)``-square matrix of
    KS distances between their simulated statistics.
    """
    if replications < 1000:
        raise ValueError("replications must be at least 1000")
    statistic = normalize_statistic(statistic)
    out = {}
    for k in d0_offsets:
        samples = []
        for d in d_values:
            res = simulate_statistics(d, d + k, n, replications, seed,
                                      workers=workers, stream=_rng.SAMPLES)
            samples.append(res.z2 if statistic == "Z2" else res.z1)
        m = len(samples)
        mat = np.zeros((m, m))
        for i in range(m):
            for j in range(i + 1, m):
                mat[i, j] = mat[j, i] = ks_distance(samples[i], samples[j])
        out[float(k)] = mat
    return out
