"""
OLS fits of the (fractional) Dickey-Fuller auxiliary regressions.

With ``x = (1 - L)**(d0 - 1) y`` the fractional regression

    (1 - L)**d0 y_t = rho * x_{t-1} + e_t,    t = 1..n,

is the no-constant Dickey-Fuller regression of ``diff(x)`` on ``x_{t-1}``.
Sums start at ``t = 1`` with ``x_0 = 0`` and the residual variance uses
divisor ``n`` rather than ``n - k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .fracdiff import as_series, frac_diff

__all__ = [
    "DegenerateRegressionError",
    "DFStatistics",
    "RegressionFit",
    "df_statistics",
    "fadf_design",
    "fit_df",
    "fit_fadf",
    "fit_fdf",
]

#: Relative pivot threshold on the normal equations used to flag rank loss.
RANK_TOL = 1e-12


class DegenerateRegressionError(ValueError):
    """The regression has a zero or rank-deficient design."""


@dataclass(frozen=True)
class RegressionFit:
    """
    Result of a (fractional) Dickey-Fuller regression.

    Attributes
    ----------
    rho_hat : float
        OLS coefficient on the lagged level.
    phi_hat : float
        ``rho_hat + 1``, the autoregressive coefficient.
    s2 : float
        Residual variance with divisor ``n``.
    se_rho : float
        Standard error of ``rho_hat``.
    z1 : float
        Normalized bias statistic ``n * rho_hat``.
    z2 : float
        t-ratio of ``rho_hat``.
    n : int
        Number of observations used in the fit.
    lag_coeffs : ndarray
        Coefficients on lagged fractional differences (empty without
        augmentation).
    """

    rho_hat: float
    phi_hat: float
    s2: float
    se_rho: float
    z1: float
    z2: float
    n: int
    lag_coeffs: np.ndarray = field(default_factory=lambda: np.empty(0))

    def statistic(self, name: str) -> float:
        """Return ``z1`` or ``z2`` by name (case-insensitive)."""
        key = name.upper()
        if key == "Z1":
            return self.z1
        if key == "Z2":
            return self.z2
        raise ValueError(f"unknown statistic {name!r}; use 'Z1' or 'Z2'")


class DFStatistics(NamedTuple):
    """Vectorized Dickey-Fuller quantities for a batch of series."""

    rho_hat: np.ndarray
    s2: np.ndarray
    z1: np.ndarray
    z2: np.ndarray


def df_statistics(x) -> DFStatistics:
    """
    Dickey-Fuller regression quantities for every series along the last axis.

    No validation beyond shapes; rows with an all-zero lagged regressor yield
    ``nan``. Intended for Monte Carlo loops; use :func:`fit_df` for single
    series.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    lagged = np.zeros_like(x)
    lagged[..., 1:] = x[..., :-1]
    dx = x - lagged
    sxy = np.einsum("...t,...t->...", dx, lagged)
    sxx = np.einsum("...t,...t->...", lagged, lagged)
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = sxy / sxx
        resid = dx - rho[..., None] * lagged
        s2 = np.einsum("...t,...t->...", resid, resid) / n
        z2 = sxy / np.sqrt(s2 * sxx)
    return DFStatistics(rho_hat=rho, s2=s2, z1=n * rho, z2=z2)


def fit_df(x) -> RegressionFit:
    """
    Classic no-constant Dickey-Fuller regression of ``diff(x)`` on ``x_{t-1}``.

    Parameters
    ----------
    x : array_like
        Level series ``x_1..x_n``; ``x_0 = 0`` is implied.

    Returns
    -------
    RegressionFit

    Raises
    ------
    ValueError
        If ``n < 3`` or the series is non-finite.
    DegenerateRegressionError
        If the lagged regressor is identically zero.
    """
    x = as_series(x, min_length=3, name="x")
    if x.ndim != 1:
        raise ValueError("fit_df expects a single 1-d series")
    n = x.shape[0]
    lagged = np.concatenate(([0.0], x[:-1]))
    dx = x - lagged
    sxx = float(lagged @ lagged)
    if sxx <= 0.0:
        raise DegenerateRegressionError("lagged regressor is identically zero")
    sxy = float(dx @ lagged)
    rho = sxy / sxx
    resid = dx - rho * lagged
    s2 = float(resid @ resid) / n
    if s2 > 0.0:
        se = float(np.sqrt(s2 / sxx))
        t = sxy / np.sqrt(s2 * sxx)
    else:
        # exact fit: the t-ratio is unbounded
        se = 0.0
        t = float(np.copysign(np.inf, rho)) if rho != 0.0 else 0.0
    return RegressionFit(
        rho_hat=rho,
        phi_hat=rho + 1.0,
        s2=s2,
        se_rho=se,
        z1=n * rho,
        z2=float(t),
        n=n,
    )


def fit_fdf(y, d0: float) -> RegressionFit:
    """
    Fractional Dickey-Fuller regression for ``H0: d >= d0``.

    Regresses ``(1 - L)**d0 y_t`` on ``(1 - L)**(d0 - 1) y_{t-1}``. With
    ``d0 = 1`` this is the classic Dickey-Fuller regression on ``y``.
    """
    y = as_series(y, min_length=3, name="y")
    if y.ndim != 1:
        raise ValueError("fit_fdf expects a single 1-d series")
    return fit_df(frac_diff(y, d0 - 1.0))


def fadf_design(y, d0: float, p: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Response and design matrix of the augmented fractional regression.

    Rows are ``t = p+1..n`` (1-based). Column 0 is ``(1 - L)**(d0-1) y_{t-1}``,
    column ``j`` is ``(1 - L)**d0 y_{t-j}`` for ``j = 1..p``. The response is
    ``(1 - L)**d0 y_t``.
    """
    y = as_series(y, min_length=3, name="y")
    p = int(p)
    if p < 0:
        raise ValueError(f"number of lags must be nonnegative, got {p}")
    n = y.shape[-1]
    if n < p + 3:
        raise ValueError(f"need at least p + 3 = {p + 3} observations, got {n}")
    x = frac_diff(y, d0 - 1.0)
    lagged = np.concatenate(([0.0], x[:-1]))
    dx = x - lagged
    cols = [lagged[p:]]
    for j in range(1, p + 1):
        cols.append(dx[p - j : n - j])
    return dx[p:], np.column_stack(cols)


def fit_fadf(y, d0: float, p: int) -> RegressionFit:
    """
    Augmented fractional Dickey-Fuller regression.

    ``(1 - L)**d0 y_t = rho (1 - L)**(d0-1) y_{t-1}
    + sum_{j=1}^{p} a_j (1 - L)**d0 y_{t-j} + e_t``, without deterministic
    terms. The first ``p`` observations are used as lags only, so the fit uses
    ``n - p`` rows; ``p = 0`` reproduces :func:`fit_fdf`.

    Raises
    ------
    DegenerateRegressionError
        If the design is rank deficient.
    """
    if int(p) == 0:
        return fit_fdf(y, d0)
    resp, design = fadf_design(y, d0, p)
    return _fit_design(resp, design)


def _fit_design(resp: np.ndarray, design: np.ndarray) -> RegressionFit:
    # column 0 carries the lagged level; the rest are augmentation lags
    nobs = design.shape[0]
    q, r = np.linalg.qr(design)
    pivots = np.abs(np.diag(r)) ** 2
    if pivots.max() <= 0.0 or pivots.min() < RANK_TOL * pivots.max():
        raise DegenerateRegressionError("augmented design is rank deficient")
    beta = np.linalg.solve(r, q.T @ resp)
    resid = resp - design @ beta
    s2 = float(resid @ resid) / nobs
    r_inv = np.linalg.inv(r)
    se = float(np.sqrt(s2 * (r_inv[0] @ r_inv[0])))
    rho = float(beta[0])
    if se > 0.0:
        t = rho / se
    else:
        t = float(np.copysign(np.inf, rho)) if rho != 0.0 else 0.0
    return RegressionFit(
        rho_hat=rho,
        phi_hat=rho + 1.0,
        s2=s2,
        se_rho=se,
        z1=nobs * rho,
        z2=t,
        n=nobs,
        lag_coeffs=beta[1:].copy(),
    )
