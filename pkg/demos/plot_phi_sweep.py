"""
Estimated AR coefficient against the integration order
======================================================

On one fixed innovation path, generate FI(d) for a grid of d and fit the
fractional regression with a fixed null order. ``phi_hat`` stays at 1 for
``d >= d0`` and drops below 1 once ``d < d0``.
"""

from fracdf import run_phi_sweep

d0 = 0.5
rows = run_phi_sweep(d_min=-0.5, d_max=2.0, step=0.1, d0=d0, n=1000, seed=4)
for d, phi in rows:
    bar = "#" * max(0, int(40 * (phi - 0.5) / 0.5))
    print(f"d = {d:4.1f}  phi_hat = {phi:.4f}  {bar}")

# %%
# ``order_shift`` generates FI(d + shift) while labelling the curve by d,
# for sweeps parameterised relative to the null order.
shifted = run_phi_sweep(-1.0, 0.0, 0.5, d0=d0, n=1000, seed=4, order_shift=0.5)
print(shifted)
