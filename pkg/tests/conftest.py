"""Collects acceptance-criterion outcomes and prints one line per criterion."""
import pytest

CRITERIA = {
    1: "size cell n=250 d=1 d0=1 alpha=5%: 94.87 +/- 1.5pp, under 120 s",
    2: "power cells n=250 d=1 alpha=5% delta=-0.1..-0.4: 20.76/51.77/86.05/99.35 +/- 2pp",
    3: "power cell n=50 d=0.5 alpha=10% delta=-0.3: 63.23 +/- 2pp",
    4: "d-invariance at fixed delta: pairwise within 2pp",
    5: "null Z2 KS distance (0.5, 0.5) vs (1, 1), n=250: < 0.023",
    6: "calibrated n=5000 Z2: -1.95 +/- 0.03 (5%), -2.58 +/- 0.05 (1%)",
    7: "closed forms vs direct Gamma to 1e-12; partial-sum ratio within 10%",
    8: "operator algebra: semigroup, inversion, linearity, FFT vs direct",
    9: "rate slopes of median |rho_hat|: -(1+2 delta) +/- 0.15, -1 +/- 0.1",
    10: "median Z2 at n=2000 below n=250 for delta=-0.25, both negative",
}

_outcomes: dict[int, list[bool]] = {}
_details: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number = marker.args[0]
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _outcomes.setdefault(number, []).append(report.passed)
        _details.setdefault(number, []).extend(
            v for k, v in item.user_properties if k == "detail")


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, text in CRITERIA.items():
        results = _outcomes.get(number)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"{status:7s} [{number:2d}] {text}")
        for detail in _details.get(number, []):
            terminalreporter.write_line(f"             {detail}")
