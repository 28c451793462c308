"""
Closed-form limits for fractional noise, used to validate simulations.

For ``eta = (1 - L)**(-delta) eps`` with i.i.d. ``eps`` of variance
``sigma2``:

* ``kappa_squared`` is the limit of ``n**(-1 - 2 delta) var(S_n)`` for the
  partial sums ``S_n`` (``2 sigma2 / pi`` with an extra ``1/log n`` at
  ``delta = 1/2``);
* ``var_delta_x`` is ``var(eta_t)``, the probability limit of the residual
  variance in the fractional Dickey-Fuller regression when ``d - d0 = delta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import partial
import math

import numpy as np
from scipy.special import gammaln, gammasgn

from . import _rng
from ._parallel import chunk_bounds, map_chunks
from .fracdiff import frac_diff

__all__ = [
    "AsymptoticConstants",
    "PartialSumCheck",
    "asymptotic_constants",
    "kappa_squared",
    "partial_sum_variance_check",
    "var_delta_x",
]


def _gamma_ratio(numer, denom) -> float:
    # prod Gamma(numer) / prod Gamma(denom) through log-Gamma with tracked signs
    logval = sum(gammaln(a) for a in numer) - sum(gammaln(b) for b in denom)
    sign = np.prod([gammasgn(a) for a in numer]) * np.prod([gammasgn(b) for b in denom])
    return float(sign * np.exp(logval))


def _check_sigma2(sigma2: float) -> float:
    sigma2 = float(sigma2)
    if not (sigma2 > 0.0 and math.isfinite(sigma2)):
        raise ValueError(f"sigma2 must be positive and finite, got {sigma2}")
    return sigma2


def kappa_squared(delta: float, sigma2: float = 1.0) -> float:
    """
    Long-run partial-sum variance constant of fractional noise.

    ``sigma2 Gamma(1 - 2 delta) / ((1 + 2 delta) Gamma(1 + delta) Gamma(1 - delta))``
    for ``|delta| < 1/2`` and ``2 sigma2 / pi`` at ``delta = 1/2``.

    Raises
    ------
    ValueError
        If ``delta`` is outside ``(-1/2, 1/2]``.
    """
    delta = float(delta)
    sigma2 = _check_sigma2(sigma2)
    if not -0.5 < delta <= 0.5:
        raise ValueError(f"delta must lie in (-0.5, 0.5], got {delta}")
    if delta == 0.5:
        return 2.0 * sigma2 / math.pi
    ratio = _gamma_ratio([1.0 - 2.0 * delta], [1.0 + delta, 1.0 - delta])
    return sigma2 * ratio / (1.0 + 2.0 * delta)


def var_delta_x(delta: float, sigma2: float = 1.0) -> float:
    """
    Variance of ``(1 - L)**(-delta) eps_t`` in the stationary limit.

    ``sigma2 Gamma(1 - 2 delta) / Gamma(1 - delta)**2`` for ``|delta| < 1/2``
    and ``4 sigma2 / pi`` at ``delta = -1/2``.
    """
    delta = float(delta)
    sigma2 = _check_sigma2(sigma2)
    if not -0.5 <= delta < 0.5:
        raise ValueError(f"delta must lie in [-0.5, 0.5), got {delta}")
    if delta == -0.5:
        return 4.0 * sigma2 / math.pi
    return sigma2 * _gamma_ratio([1.0 - 2.0 * delta], [1.0 - delta, 1.0 - delta])


@dataclass(frozen=True)
class AsymptoticConstants:
    delta: float
    sigma2: float
    kappa2: float
    var_dx: float


def asymptotic_constants(delta: float, sigma2: float = 1.0) -> AsymptoticConstants:
    """Both constants at once; ``delta`` must lie in ``(-1/2, 1/2)``."""
    return AsymptoticConstants(
        delta=float(delta),
        sigma2=float(sigma2),
        kappa2=kappa_squared(delta, sigma2),
        var_dx=var_delta_x(delta, sigma2),
    )


@dataclass(frozen=True)
class PartialSumCheck:
    empirical: float
    theoretical: float
    ratio: float
    delta: float
    n: int
    replications: int
    presample: int
    log_scaled: bool


def _partial_sums(delta, sigma, seed, n, presample, start, stop):
    total = n + presample
    eps = sigma * _rng.replication_normals(
        seed, (_rng.PARTIAL_SUM, _rng.encode_real(delta), n, presample), start, stop, total
    )
    eta = frac_diff(eps, -delta)
    return eta[:, presample:].sum(axis=1)


def partial_sum_variance_check(
    delta: float,
    sigma2: float = 1.0,
    n: int = 4096,
    replications: int = 2000,
    seed: int = 0,
    presample: int | None = None,
    log_scale: bool | None = None,
    workers: int = 1,
) -> PartialSumCheck:
    """
    Monte Carlo check of the partial-sum variance limit.

    Simulates ``eta = (1 - L)**(-delta) eps`` over ``presample + n`` periods,
    keeps the last ``n``, and compares ``mean(S_n**2) / n**(1 + 2 delta)``
    (further divided by ``log n`` when ``log_scale``) with
    :func:`kappa_squared`.

    Parameters
    ----------
    presample : int, optional
        Length of the discarded pre-history. Defaults to ``n``; the limit is
        a statement about the stationary process, and with no pre-history
        the ratio converges to ``Gamma(1-delta) / (Gamma(1+delta)
        Gamma(1-2 delta))`` instead of 1.
    log_scale : bool, optional
        Divide by ``log n``. Defaults to ``delta == 0.5``.
    """
    delta = float(delta)
    sigma2 = _check_sigma2(sigma2)
    if n < 1024:
        raise ValueError(f"n must be at least 1024, got {n}")
    if replications < 500:
        raise ValueError(f"replications must be at least 500, got {replications}")
    n = int(n)
    presample = n if presample is None else int(presample)
    if presample < 0:
        raise ValueError("presample must be nonnegative")
    if log_scale is None:
        log_scale = delta == 0.5
    theoretical = kappa_squared(delta, sigma2)
    func = partial(
        _partial_sums, delta, math.sqrt(sigma2), _rng.check_seed(seed), n, presample
    )
    sums = np.concatenate(
        map_chunks(func, chunk_bounds(int(replications), n + presample), workers)
    )
    # E[S_n] = 0 is known, so the mean square is unbiased for var(S_n)
    scale = n ** (1.0 + 2.0 * delta) * (math.log(n) if log_scale else 1.0)
    empirical = float(np.mean(sums**2)) / scale
    return PartialSumCheck(
        empirical=empirical,
        theoretical=theoretical,
        ratio=empirical / theoretical,
        delta=delta,
        n=n,
        replications=int(replications),
        presample=presample,
        log_scaled=bool(log_scale),
    )
