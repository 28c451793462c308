"""
Fractional differencing and integration on finite samples.

All operators act on the truncated sample: values before the first
observation are zero, so ``(1 - L)**d`` is the lower-triangular Toeplitz
matrix built from the binomial expansion coefficients. Series run along the
last axis, so a 2-d array is treated as a batch of independent series.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy import fft as sp_fft
from scipy.linalg import toeplitz

__all__ = [
    "FFT_THRESHOLD",
    "FracDiffKernel",
    "as_series",
    "frac_diff",
    "frac_diff_direct",
    "frac_diff_fft",
    "generate_fi",
    "kernel",
]

#: Series at least this long are differenced with the FFT path by default.
FFT_THRESHOLD = 512


@dataclass(frozen=True)
class FracDiffKernel:
    """
    Truncated coefficient sequence of ``(1 - L)**order``.

    Attributes
    ----------
    order : float
        The differencing exponent. Negative values integrate.
    coeffs : ndarray
        ``coeffs[i]`` is the coefficient on ``L**i``.
    """

    order: float
    coeffs: np.ndarray

    def __len__(self) -> int:
        return len(self.coeffs)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coeffs, dtype=dtype)


def _check_order(d: float) -> float:
    d = float(d)
    if not math.isfinite(d):
        raise ValueError(f"differencing order must be finite, got {d!r}")
    return d


def as_series(values, min_length: int = 1, name: str = "series") -> np.ndarray:
    """
    Validate ``values`` as a (batch of) real time series.

    Returns a float64 array whose last axis is time. Raises ``ValueError`` for
    empty, too short or non-finite input.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape[-1] < max(min_length, 1):
        raise ValueError(
            f"{name} needs at least {max(min_length, 1)} observations, "
            f"got {arr.shape[-1]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def kernel(d: float, length: int) -> FracDiffKernel:
    """
    Coefficients of ``(1 - L)**d`` up to lag ``length - 1``.

    Uses the recursion ``pi_0 = 1``, ``pi_i = pi_{i-1} (i - 1 - d) / i``,
    which stays finite where the Gamma-function form has poles (integer
    ``d``) or overflows (large ``i``).

    Parameters
    ----------
    d : float
        Differencing order, any finite real.
    length : int
        Number of coefficients, at least 1.

    Examples
    --------
    >>> kernel(0.5, 4).coeffs
    array([ 1.    , -0.5   , -0.125 , -0.0625])
    """
    d = _check_order(d)
    if int(length) != length or length < 1:
        raise ValueError(f"kernel length must be a positive integer, got {length!r}")
    length = int(length)
    coeffs = np.empty(length)
    coeffs[0] = 1.0
    if length > 1:
        i = np.arange(1, length, dtype=np.float64)
        coeffs[1:] = np.cumprod((i - 1.0 - d) / i)
    return FracDiffKernel(order=d, coeffs=coeffs)


def frac_diff_direct(y, d: float) -> np.ndarray:
    """Apply ``(1 - L)**d`` by direct O(n^2) convolution."""
    d = _check_order(d)
    y = as_series(y)
    n = y.shape[-1]
    c = kernel(d, n).coeffs
    if y.ndim == 1:
        return np.convolve(y, c)[:n]
    # batch: one lower-triangular Toeplitz product for all rows
    lower = toeplitz(c, np.zeros(n))
    return y @ lower.T


def frac_diff_fft(y, d: float) -> np.ndarray:
    """Apply ``(1 - L)**d`` by zero-padded FFT convolution, O(n log n)."""
    d = _check_order(d)
    y = as_series(y)
    n = y.shape[-1]
    c = kernel(d, n).coeffs
    size = sp_fft.next_fast_len(2 * n - 1, real=True)
    spec = sp_fft.rfft(y, size, axis=-1) * sp_fft.rfft(c, size)
    return sp_fft.irfft(spec, size, axis=-1)[..., :n]


def frac_diff(y, d: float, method: str = "auto") -> np.ndarray:
    """
    Fractionally difference ``y`` with pre-sample values set to zero.

    ``z[t] = sum_{i=0}^{t} pi_i(d) * y[t - i]`` (0-based), so the output has the
    same length as the input. Negative ``d`` integrates.

    Parameters
    ----------
    y : array_like
        Series, or a 2-d batch of series along the last axis.
    d : float
        Differencing order.
    method : {"auto", "direct", "fft"}
        ``"auto"`` switches to the FFT path for series of length
        ``FFT_THRESHOLD`` or more.

    Returns
    -------
    ndarray
        Differenced series, same shape as ``y``.
    """
    if method == "auto":
        method = "fft" if np.shape(y)[-1:] >= (FFT_THRESHOLD,) else "direct"
    if method == "direct":
        return frac_diff_direct(y, d)
    if method == "fft":
        return frac_diff_fft(y, d)
    raise ValueError(f"unknown method {method!r}; use 'auto', 'direct' or 'fft'")


def generate_fi(d: float, innovations, method: str = "auto") -> np.ndarray:
    """
    Fractionally integrate ``innovations`` to an FI(d) sample.

    ``x[t] = sum_{j=0}^{t-1} Gamma(d + j) / (Gamma(d) Gamma(j + 1)) u[t - j]``,
    i.e. ``(1 - L)**(-d)`` applied to ``u`` with a zero pre-sample.
    """
    d = _check_order(d)
    return frac_diff(innovations, -d, method=method)
