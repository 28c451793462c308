"""
The null distribution does not depend on d
==========================================

Kernel densities and a Kolmogorov-Smirnov comparison of the t-statistic at
``d = d0`` for two different orders.
"""

import numpy as np

from fracdf import distribution_equivalence, kernel_density, simulate_statistics
from fracdf.fdftest import load_table

# %%
# Simulate the statistic at d = d0 = 0.5 and d = d0 = 1.
a = simulate_statistics(0.5, 0.5, 250, 5000, seed=11).z2
b = simulate_statistics(1.0, 1.0, 250, 5000, seed=11).z2
ga, gb = kernel_density(a), kernel_density(b)
print(f"bandwidths: {ga.bandwidth:.3f}, {gb.bandwidth:.3f}")

# %%
# A coarse text rendering of both densities on a common grid.
for x in np.arange(-3.5, 2.6, 0.5):
    bar_a = "#" * int(60 * ga(x))
    bar_b = "+" * int(60 * gb(x))
    print(f"{x:5.1f} {bar_a:<30s}{bar_b}")

# %%
# Quantiles of the simulated statistic agree with the tabulated
# Dickey-Fuller critical values.
table = load_table("Z2")
for alpha in (0.01, 0.05, 0.10):
    print(f"alpha {alpha:4.2f}: sample {np.quantile(a, alpha):6.3f}, table {table.entries[(250, alpha)]:6.3f}")

# %%
# Pairwise KS distances at delta = 0 and at delta = -0.3.
ks = distribution_equivalence([0.0, 0.5, 1.0], [0.0, 0.3], n=250, replications=2000, seed=12)
for offset, mat in ks.items():
    print(f"delta = {0.0 - offset:+.1f}")
    print(np.round(mat, 3))
