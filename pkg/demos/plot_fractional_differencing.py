"""
Fractional differencing
=======================

Build the coefficients of ``(1 - L)**d``, difference a series, and undo it.
"""

import numpy as np

from fracdf import frac_diff, generate_fi, kernel

# %%
# The coefficients follow pi_i = pi_{i-1} (i - 1 - d) / i. For d = 1 the
# expansion stops after two terms; for fractional d it decays slowly.
for d in (1.0, 0.4, -0.4):
    print(f"d = {d:5.2f}:", np.round(kernel(d, 6).coeffs, 4))

# %%
# ``generate_fi`` integrates white noise to order d (pre-sample values are
# zero), and ``frac_diff`` with the same order recovers the noise.
rng = np.random.default_rng(1)
u = rng.standard_normal(1000)
y = generate_fi(0.7, u)
print("max |frac_diff(y, 0.7) - u| =", np.abs(frac_diff(y, 0.7) - u).max())

# %%
# Orders add: differencing by 0.3 then by 0.4 equals differencing by 0.7.
two_step = frac_diff(frac_diff(y, 0.3), 0.4)
print("max |two-step - one-step| =", np.abs(two_step - frac_diff(y, 0.7)).max())

# %%
# Long memory shows in the sample autocorrelations of y, which die out far
# more slowly than those of the innovations.
def acf(x, lags):
    x = x - x.mean()
    return [float(x[k:] @ x[:-k] / (x @ x)) for k in lags]

lags = (1, 5, 20, 50)
print("acf of u:", np.round(acf(u, lags), 3))
print("acf of FI(0.4):", np.round(acf(generate_fi(0.4, u), lags), 3))
