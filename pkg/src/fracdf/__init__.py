"""Fractional Dickey-Fuller testing of ``H0: d >= d0`` against ``H1: d < d0``."""
from .asymp import kappa_squared, partial_sum_variance_check, var_delta_x
from .fdftest import (
    CriticalValueTable,
    TestOutcome,
    calibrate_critical_values,
    fdf_test,
    load_table,
    lookup_critical,
)
from .fracdiff import FracDiffKernel, frac_diff, frac_diff_fft, generate_fi, kernel
from .montecarlo import (
    McConfig,
    McReport,
    distribution_equivalence,
    kernel_density,
    run_phi_sweep,
    run_size_power,
    simulate_statistics,
)
from .regress import DegenerateRegressionError, RegressionFit, fit_df, fit_fadf, fit_fdf

__version__ = "0.1.0"

__all__ = [
    "CriticalValueTable",
    "DegenerateRegressionError",
    "FracDiffKernel",
    "McConfig",
    "McReport",
    "RegressionFit",
    "TestOutcome",
    "calibrate_critical_values",
    "distribution_equivalence",
    "fdf_test",
    "fit_df",
    "fit_fadf",
    "fit_fdf",
    "frac_diff",
    "frac_diff_fft",
    "generate_fi",
    "kappa_squared",
    "kernel",
    "kernel_density",
    "load_table",
    "lookup_critical",
    "partial_sum_variance_check",
    "run_phi_sweep",
    "run_size_power",
    "simulate_statistics",
    "var_delta_x",
]
