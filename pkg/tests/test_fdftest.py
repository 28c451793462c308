import io

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fracdf.fdftest import (
    DEFAULT_ALPHA_GRID,
    DEFAULT_N_GRID,
    TABLE_ENV_VAR,
    Calibration,
    CriticalValueTable,
    TableCoverageError,
    calibrate_critical_values,
    fdf_test,
    load_table,
    lookup_critical,
    read_tables,
    simulate_null_statistic,
    write_tables,
)
from fracdf.fracdiff import generate_fi
from fracdf.montecarlo import simulate_statistics


def make_table(entries, statistic="Z2"):
    ns = tuple(sorted({n for n, _ in entries}))
    alphas = tuple(sorted({a for _, a in entries}))
    return CriticalValueTable(statistic, dict(entries), Calibration(1000, 0, ns, alphas))


TOY = make_table({
    (50, 0.05): -2.0, (100, 0.05): -1.9, (200, 0.05): -1.8,
    (50, 0.1): -1.6, (100, 0.1): -1.5, (200, 0.1): -1.4,
})


def test_lookup_exact_hit():
    assert lookup_critical(TOY, 100, 0.05) == -1.9
    assert lookup_critical(TOY, 50, 0.1 + 1e-12) == -1.6


def test_lookup_interpolates_in_inverse_n():
    # 1/n midway between 1/100 and 1/200 gives n = 400/3
    assert_allclose(lookup_critical(TOY, 400 / 3, 0.05), -1.85, rtol=1e-12)
    # n = 75 is not midway in 1/n between 50 and 100
    w = (1 / 75 - 1 / 100) / (1 / 50 - 1 / 100)
    assert_allclose(lookup_critical(TOY, 75, 0.1), w * -1.6 + (1 - w) * -1.5, rtol=1e-12)


def test_lookup_coverage():
    assert lookup_critical(TOY, 10_000, 0.05) == -1.8
    with pytest.raises(TableCoverageError):
        lookup_critical(TOY, 20, 0.05)
    with pytest.raises(TableCoverageError):
        lookup_critical(TOY, 100, 0.01)


def flat_table(c):
    return make_table({(n, 0.05): c for n in (3, 10_000)})


def test_decision_rule_is_strict():
    y = np.cumsum(np.random.default_rng(0).standard_normal(100))
    value = fdf_test(y, table=flat_table(0.0)).value
    tie = fdf_test(y, table=flat_table(value))
    assert tie.value == tie.critical_value and not tie.reject
    above = fdf_test(y, table=flat_table(np.nextafter(value, np.inf)))
    assert above.reject
    for out in (tie, above):
        assert out.reject == (out.value < out.critical_value)


def test_clear_rejection():
    # (1 - 0.5 L) x = u is stationary: strongly below the unit-root critical value
    u = np.random.default_rng(1).standard_normal(500)
    x = np.zeros_like(u)
    for t in range(len(u)):
        x[t] = (0.5 * x[t - 1] if t else 0.0) + u[t]
    out = fdf_test(x, d0=1.0, alpha=0.05)
    assert out.value < -3.0 and out.reject
    assert out.statistic_used == "Z2"


def test_reduction_identity_with_classic_df():
    y = np.cumsum(np.random.default_rng(2).standard_normal(300))
    out = fdf_test(y, d0=1.0)
    lag = np.concatenate(([0.0], y[:-1]))
    dy = np.diff(y, prepend=0.0)
    rho = (lag @ dy) / (lag @ lag)
    s2 = np.mean((dy - rho * lag) ** 2)
    t = (lag @ dy) / np.sqrt(s2 * (lag @ lag))
    assert_allclose(out.value, t, rtol=1e-12)
    z1 = fdf_test(y, d0=1.0, statistic="z1", table=load_table("Z1"))
    assert_allclose(z1.value, len(y) * rho, rtol=1e-12)


def test_fdf_test_errors():
    y = np.cumsum(np.random.default_rng(3).standard_normal(60))
    with pytest.raises(ValueError):
        fdf_test(y, alpha=0.6)
    with pytest.raises(ValueError):
        fdf_test(y, statistic="Z1", table=load_table("Z2"))
    with pytest.raises(ValueError):
        fdf_test(y, statistic="Z3")
    with pytest.raises(TableCoverageError):
        fdf_test(y[:10])


def test_augmented_test_uses_effective_sample_size():
    y = generate_fi(0.9, np.random.default_rng(4).standard_normal(120))
    out = fdf_test(y, d0=0.9, p=2)
    assert out.fit.n == 118
    assert out.critical_value == lookup_critical(load_table("Z2"), 118, 0.05)
    assert out.fit.lag_coeffs.shape == (2,)


def test_calibration_is_deterministic_and_worker_independent():
    kw = dict(n_grid=(30, 60), alpha_grid=(0.05, 0.1), replications=2000, seed=11)
    a = calibrate_critical_values("Z2", **kw)
    b = calibrate_critical_values("Z2", **kw, workers=2)
    assert a.entries == b.entries
    c = calibrate_critical_values("Z2", **{**kw, "seed": 12})
    assert a.entries != c.entries
    # chunking must not leak into the draws
    long = simulate_null_statistic("Z2", 60, 2000, seed=11)
    assert_allclose(long[:500], simulate_null_statistic("Z2", 60, 500, seed=11), rtol=0)


def test_calibration_quantiles_and_monotonicity():
    table = calibrate_critical_values("Z1", n_grid=(40,), alpha_grid=(0.01, 0.05, 0.1),
                                      replications=10_000, seed=3)
    sample = simulate_null_statistic("Z1", 40, 10_000, seed=3)
    for a in (0.01, 0.05, 0.1):
        assert table.entries[(40, a)] == np.quantile(sample, a)
    col = table.column(0.01), table.column(0.05), table.column(0.1)
    assert col[0] < col[1] < col[2] < 0
    assert table.calibration.replications == 10_000


def test_calibration_errors():
    with pytest.raises(ValueError):
        calibrate_critical_values("Z2", n_grid=(50,), alpha_grid=(0.01,), replications=9_999)
    with pytest.raises(ValueError):
        calibrate_critical_values("Z2", n_grid=(), replications=10_000)
    with pytest.raises(ValueError):
        calibrate_critical_values("Z2", n_grid=(50,), alpha_grid=(0.7,), replications=10_000)


def test_csv_round_trip(tmp_path):
    a = calibrate_critical_values("Z1", n_grid=(25, 50), alpha_grid=(0.05,), replications=2000, seed=5)
    b = calibrate_critical_values("Z2", n_grid=(25, 50), alpha_grid=(0.05,), replications=2000, seed=5)
    text = write_tables([a, b])
    assert text.splitlines()[0] == "statistic,n,alpha,critical_value,replications,seed"
    back = read_tables(io.StringIO(text))
    assert back["Z1"] == a and back["Z2"] == b
    path = tmp_path / "cv.csv"
    write_tables([b], path)
    assert read_tables(path)["Z2"] == b


def test_env_var_overrides_bundled_table(tmp_path, monkeypatch):
    custom = make_table({(25, 0.05): -9.0, (5000, 0.05): -9.0})
    path = tmp_path / "custom.csv"
    write_tables([custom], path)
    monkeypatch.setenv(TABLE_ENV_VAR, str(path))
    assert load_table("Z2") == custom
    y = np.cumsum(np.random.default_rng(6).standard_normal(100))
    assert fdf_test(y).critical_value == -9.0
    with pytest.raises(TableCoverageError):
        load_table("Z1")
    monkeypatch.delenv(TABLE_ENV_VAR)
    assert load_table("Z2") != custom


@pytest.mark.parametrize("stat", ["Z1", "Z2"])
def test_bundled_table_invariants(stat):
    table = load_table(stat)
    assert table.n_grid == DEFAULT_N_GRID
    assert table.alpha_grid == DEFAULT_ALPHA_GRID
    assert table.calibration.replications >= 100_000
    for n in table.n_grid:
        col = [table.entries[(n, a)] for a in table.alpha_grid]
        assert np.all(np.diff(col) > 0)
        assert max(col) < 0


def test_bundled_z2_matches_known_df_values():
    table = load_table("Z2")
    assert abs(table.entries[(5000, 0.05)] + 1.95) < 0.03
    assert abs(table.entries[(5000, 0.01)] + 2.58) < 0.05


@pytest.mark.parametrize("delta", [0.1, 0.2, 0.3, 0.4])
def test_size_when_true_order_exceeds_null(delta):
    d0, n, reps = 0.5, 100, 4000
    z2 = simulate_statistics(d0 + delta, d0, n, reps, seed=21).z2
    for alpha in (0.05, 0.10):
        rate = np.mean(z2 < lookup_critical(load_table("Z2"), n, alpha))
        assert rate <= alpha + 0.01


def test_power_increases_as_delta_falls():
    d0, n, reps = 1.0, 100, 2000
    crit = lookup_critical(load_table("Z2"), n, 0.05)
    rates = [np.mean(simulate_statistics(d0 + delta, d0, n, reps, seed=22).z2 < crit)
             for delta in (-0.1, -0.2, -0.3, -0.4)]
    assert np.all(np.diff(rates) > 0)
